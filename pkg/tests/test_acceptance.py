"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line; the lines are printed in the
pytest terminal summary, or directly when this file is run as a script.
"""
import itertools
import json
import math
import random
import sys
import time
from fractions import Fraction

import pytest

from weylmaj import cli
from weylmaj import compactfns as C
from weylmaj import exppoly as E
from weylmaj import hgf1 as G
from weylmaj import hopoly as H
from weylmaj import majorize as M
from weylmaj import orbital as O
from weylmaj import rootsys as R

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []


def record(num, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] AC{num:<2} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    if __name__ == "__main__":
        print(line, flush=True)
    assert ok, line


def build(label):
    return R.build(R.parse_label(label))


def scan(tmp_path, *argv):
    out = tmp_path / f"scan{len(list(tmp_path.iterdir()))}.jsonl"
    code = cli.main(["--output", str(out), "conjecture-scan", *argv])
    summary = json.loads(out.read_text().splitlines()[-1])
    return code, summary


# --------------------------------------------------------------------------


def test_ac01_majorization_oracle_equivalence():
    labels = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "BC2"]
    per = 1000
    rnd = random.Random(2024)
    start = time.perf_counter()
    mismatches = agree_true = total = 0
    for label in labels:
        rs = build(label)
        for i in range(per):
            lam = tuple(Fraction(rnd.randint(-12, 12), rnd.choice((1, 2, 3))) for _ in range(rs.ambient_dim))
            kind = i % 3
            if kind == 0:
                mu = tuple(Fraction(rnd.randint(-12, 12), rnd.choice((1, 2, 3))) for _ in range(rs.ambient_dim))
            else:
                # convex combination of a few orbit points, sometimes pushed slightly outward
                orbit = R.weyl_orbit(rs, lam)
                pts = [rnd.choice(orbit) for _ in range(3)]
                ws = [Fraction(rnd.randint(1, 6)) for _ in pts]
                s = sum(ws)
                mu = tuple(sum(w * p[j] for w, p in zip(ws, pts)) / s for j in range(rs.ambient_dim))
                if kind == 2:
                    mu = R.vscale(Fraction(rnd.choice((99, 100, 101)), 100), mu)
            a = M.w_majorizes(rs, lam, mu)
            b = M.w_majorizes_hull_oracle(rs, lam, mu)
            mismatches += a != b
            agree_true += a and b
            total += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 300 and total >= 10_000
    record(1, "majorization oracle equivalence", ok, f"{total} pairs over {len(labels)} systems, {mismatches} mismatches, {agree_true} majorizing, {elapsed:.1f} s")


def test_ac02_schur_inequalities_characterize_majorization():
    start = time.perf_counter()
    pairs = bad = 0
    for n in (3, 4):
        for d in range(1, 7):
            parts = C.partitions(d, n)
            for lam, mu in itertools.product(parts, parts):
                v = C.cgss_verdict(lam, mu, n, tol=1e-10)
                pairs += 1
                bad += not v.consistent
    record(2, "partition majorization vs Schur inequalities (d <= 6, N in {3, 4})", bad == 0, f"{pairs} pairs, {bad} mismatches, {time.perf_counter() - start:.1f} s")


def test_ac03_orbital_formula_vs_monte_carlo_and_symmetry():
    cfg = O.OrbitalEvalConfig(mc_samples=1_000_000, rng_seed=20240601)
    cases = [
        (2, (1, 0), (1, 0)),
        (2, (Fraction(3, 2), Fraction(-1, 2)), (0.7, -0.3)),
        (3, (1, 0, -1), (0.5, 0.2, -0.4)),
        (3, (1, 1, 0), (0.6, -0.1, 0.3)),
    ]
    worst = 0.0
    for n, lam, x in cases:
        mean, err = O.mc_unitary_oracle(n, lam, x, cfg)
        exact = O.hc_eval(build(f"A{n - 1}"), tuple(Fraction(c) for c in lam), x)
        worst = max(worst, abs(mean - exact) / err)
    rnd = random.Random(3)
    sym = 0.0
    for _ in range(100):
        label = rnd.choice(["A2", "A3", "B2", "G2"])
        rs = build(label)
        while True:
            lam = tuple(rnd.uniform(-2, 2) for _ in range(rs.ambient_dim))
            x = tuple(rnd.uniform(-2, 2) for _ in range(rs.ambient_dim))
            if abs(float(R.discriminant(rs, lam)) * float(R.discriminant(rs, x))) > 1e-6:
                break
        a, b = O.hc_eval(rs, lam, x), O.hc_eval(rs, x, lam)
        sym = max(sym, abs(a - b) / abs(a))
    ok = worst <= 3 and sym <= 1e-10
    record(3, "orbital formula vs Monte Carlo, symmetry", ok, f"max |MC - exact| = {worst:.2f} stderr over {len(cases)} cases (1e6 samples, one degenerate), max symmetry gap {sym:.1e}")


@pytest.mark.parametrize("label", ["A", "B"])
def test_ac04_hciz_scan(tmp_path, label):
    code, s = scan(tmp_path, "--mode", "hciz", "--type", label, "--rank", "2", "--cases", "500", "--seed", "7")
    record(4, f"orbital-transform scan {label}2", code == 0, f"exit {code}, {s['case_count']} cases, {s['violations']} flagged, min margin {s['min_margin']:.3g}")


def test_ac05_cherednik_commutativity():
    rnd = random.Random(5)
    fails = 0
    count = 0
    for label in ["A2", "B2", "G2"]:
        rs = build(label)
        for _ in range(34 if label != "G2" else 32):
            k = R.MultiplicityParam(tuple(Fraction(rnd.randint(0, 12), rnd.randint(1, 5)) for _ in range(rs.n_orbits)))
            f = E.ExpPoly({tuple(rnd.randint(-2, 2) for _ in range(rs.rank)): Fraction(rnd.randint(-9, 9), rnd.randint(1, 4)) for _ in range(4)}, rs.rank)
            y1 = tuple(Fraction(rnd.randint(-6, 6), rnd.randint(1, 3)) for _ in range(rs.ambient_dim))
            y2 = tuple(Fraction(rnd.randint(-6, 6), rnd.randint(1, 3)) for _ in range(rs.ambient_dim))
            a = E.cherednik_apply(rs, k, y1, E.cherednik_apply(rs, k, y2, f))
            b = E.cherednik_apply(rs, k, y2, E.cherednik_apply(rs, k, y1, f))
            fails += a != b
            count += 1
    record(5, "Cherednik operators commute (exact)", fails == 0, f"{count} random (f, y1, y2, k) in A2, B2, G2, {fails} failures")


def _partition_coords(parts, n):
    p = list(parts) + [0] * (n + 1 - len(parts))
    return tuple(p[i] - p[i + 1] for i in range(n))


def test_ac06_heckman_opdam_constructions():
    notes = []
    bad_zero = 0
    for label in ["A2", "B2", "G2", "BC2", "A3"]:
        rs = build(label)
        k0 = R.MultiplicityParam((0,) * rs.n_orbits)
        for lam in itertools.product(range(3), repeat=rs.rank):
            bad_zero += H.ho_poly(rs, k0, lam).as_exppoly != E.monomial_symmetric(rs, lam)
    notes.append(f"k=0 mismatches {bad_zero}")
    bad_schur = schur_cases = 0
    for n in (2, 3):
        rs = build(f"A{n}")
        for d in range(1, 6):
            for lam in C.partitions(d, n + 1):
                p = H.ho_poly(rs, R.MultiplicityParam((1,)), _partition_coords(lam.parts, n))
                kostka = {
                    _partition_coords(content, n): cnt
                    for content, cnt in C._content_counts(lam.parts, n + 1)
                    if list(content) == sorted(content, reverse=True)
                }
                bad_schur += p.coeffs != kostka
                schur_cases += 1
    notes.append(f"Schur mismatches {bad_schur}/{schur_cases}")
    rnd = random.Random(6)
    worst, oracle_cases = 0.0, 0
    for label in ["A1", "BC1", "A2", "B2", "G2", "BC2"]:
        rs = build(label)
        for lam in itertools.product(range(7), repeat=rs.rank):
            if len(E.low_set(rs, lam)) > 6:
                continue
            k = R.MultiplicityParam(tuple(Fraction(rnd.randint(1, 16), rnd.randint(1, 5)) for _ in range(rs.n_orbits)))
            a = H.ho_poly(rs, k, lam)
            b = H.ho_poly_cherednik_oracle(rs, k, lam)
            for mu in E.low_set(rs, lam):
                worst = max(worst, abs(float(a.coefficient(mu) - b.coefficient(mu))))
            oracle_cases += 1
    notes.append(f"Gram vs Cherednik max coefficient gap {worst:.1e} over {oracle_cases} cases")
    ok = bad_zero == 0 and bad_schur == 0 and worst <= 1e-9
    record(6, "Heckman-Opdam polynomial correctness", ok, ", ".join(notes))


def test_ac07_normalization_identity():
    rnd = random.Random(7)
    labels = ["A1", "BC1", "A2", "B2", "G2", "BC2", "A3", "B3", "C3"]
    vals = (Fraction(1, 2), Fraction(1), Fraction(2))
    worst = 0.0
    for i in range(50):
        rs = build(labels[i % len(labels)])
        k = R.MultiplicityParam(tuple(rnd.choice(vals) for _ in range(rs.n_orbits)))
        top = 2 if rs.rank <= 2 else 1
        lam = tuple(rnd.randint(0, top) for _ in range(rs.rank))
        worst = max(worst, H.normalization_residual(rs, k, lam))
    record(7, "normalization c(lam + rho_k) P(0) = 1", worst <= 1e-8, f"50 samples, ranks <= 3, k in {{1/2, 1, 2}}, max residual {worst:.1e}")


def test_ac08_three_way_identity():
    worst = 0.0
    count = 0
    for label in ["A2", "B2"]:
        rs = build(label)
        k = R.MultiplicityParam.uniform(rs, 1)
        grid = [-1.5, -0.5, 0.25, 1.0, 2.0]
        for lam in itertools.product(range(3), repeat=2):
            poly = H.ho_poly(rs, k, lam)
            shifted = R.vadd(E.to_ambient(rs, lam), R.rho(rs))
            for pt in itertools.product(grid, repeat=2):
                x = R.project_to_span(rs, tuple(pt) + (0.0,) * (rs.ambient_dim - 2))
                if abs(float(R.discriminant(rs, x))) < 1e-12:
                    continue
                d1 = math.prod(2 * math.sinh(float(R.dot(a, x)) / 2) for a in rs.positive_roots)
                lhs = H.f_spectral(rs, k, lam, x, poly=poly) * d1
                rhs = float(R.discriminant(rs, x)) * O.hc_eval(rs, shifted, x)
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
                count += 1
    record(8, "F * delta_1 = Delta * L at k = 1", worst <= 1e-8, f"{count} points on A2 and B2 grids, max scaled gap {worst:.1e}")


def test_ac09_rank_one(tmp_path):
    rnd = random.Random(9)
    overlap = 0.0
    for _ in range(400):
        a, b, c = rnd.uniform(-3, 5), rnd.uniform(-3, 5), rnd.uniform(0.5, 4)
        z = rnd.uniform(-0.999, -0.5)
        d = G.gauss_2f1(a, b, c, z, method="direct")
        p = G.gauss_2f1(a, b, c, z, method="pfaff")
        overlap = max(overlap, abs(d - p) / max(1.0, abs(d)))
    grid = [0.5 + 0.25 * i for i in range(19)]
    ode = max(G.ode_check(G.Rank1Params(rnd.uniform(0, 3), rnd.uniform(0, 2), rnd.uniform(-3, 3), 0.0), grid) for _ in range(20))
    code, s = scan(tmp_path, "--mode", "rank1", "--cases", "1000", "--seed", "9")
    ok = overlap <= 1e-10 and ode <= 1e-5 and code == 0
    record(9, "rank one", ok, f"direct vs Pfaff gap {overlap:.1e}, ODE residual {ode:.1e}, scan of 1000 cases exit {code}")


def test_ac10_asymptotic_envelope():
    rnd = random.Random(10)
    samples = []
    for i in range(14):
        label = ["A2", "B2", "G2", "BC2", "A1", "A3", "B3"][i % 7]
        rs = build(label)
        k = R.MultiplicityParam(tuple(Fraction(rnd.randint(1, 8), 4) for _ in range(rs.n_orbits)))
        top = 2 if rs.rank <= 2 else 1
        samples.append(("spectral", rs, k, tuple(rnd.randint(0, top) for _ in range(rs.rank))))
    for i in range(6):
        # degenerate spectral parameter 0 (all indivisible roots in the product), rank one
        label = "BC1" if i % 2 else "A1"
        rs = build(label)
        k = R.MultiplicityParam(tuple(Fraction(rnd.randint(1, 8), 4) for _ in range(rs.n_orbits)))
        samples.append(("rank1", rs, k, None))
    ts = [5.0 + 2.5 * j for j in range(19)]
    lo, hi, spread = math.inf, 0.0, 0.0
    for kind, rs, k, lam in samples:
        y = R.rho(rs)
        norm = math.sqrt(float(R.dot(y, y)))
        y = tuple(float(c) / norm for c in y)
        if kind == "spectral":
            poly = H.ho_poly(rs, k, lam)
            spec = R.vadd(E.to_ambient(rs, lam), R.rho_k(rs, k))
            F = lambda t: H.f_spectral(rs, k, lam, tuple(t * c for c in y), poly=poly)
        else:
            spec = rs.zero()
            if rs.label.family == "A":
                # A1 with <alpha, alpha> = 2 is the rank-one family with k1 = k, k2 = 0 and x = <alpha, x>
                k1, k2, s = float(k.values[0]), 0.0, float(R.dot(rs.positive_roots[0], y))
            else:
                k1, k2, s = float(k.values[0]), float(k.values[1]), float(y[0])
            F = lambda t: G.f_rank1(G.Rank1Params(k1, k2, 0.0, t * s))
        logs = []
        for t in ts:
            r = F(t) / H.asymptotic_envelope(rs, k, spec, y, t)
            lo, hi = min(lo, r), max(hi, r)
            logs.append((t, math.log(r)))
        tail = [v for t, v in logs if t >= 25]
        spread = max(spread, max(tail) - min(tail))
    ok = lo >= 1e-3 and hi <= 1e3 and spread <= 1.0
    record(10, "asymptotic envelope", ok, f"{len(samples)} samples (6 degenerate), ratio in [{lo:.3g}, {hi:.3g}] on t in [5, 50], max log spread {spread:.3f} on [25, 50]")


def test_ac11_bessel_bridge():
    rs = build("A2")
    k = R.MultiplicityParam((1,))
    rnd = random.Random(11)
    worst = 0.0
    n = 0
    for _ in range(8):
        a, b = Fraction(rnd.randint(0, 6), 4), Fraction(rnd.randint(0, 6), 4)
        if a == b == 0:
            continue
        lam = (Fraction(2 * a + b, 3), Fraction(b - a, 3), Fraction(-a - 2 * b, 3))
        x = R.project_to_span(rs, tuple(rnd.uniform(-1, 1) for _ in range(3)))
        est = H.bessel(rs, k, lam, x)
        ref = O.hc_eval(rs, lam, x)
        worst = max(worst, abs(est.value - ref) / abs(ref))
        n += 1
    record(11, "rational limit at k = 1 equals the orbital transform", worst <= 1e-4, f"{n} A2 samples, max relative gap {worst:.1e}")


@pytest.mark.parametrize("label", ["B", "G"])
def test_ac12_spectral_scan(tmp_path, label):
    code, s = scan(tmp_path, "--mode", "spectral", "--type", label, "--rank", "2", "--cases", "1000", "--seed", "12")
    record(12, f"spectral-point scan {label}2", code == 0, f"exit {code}, {s['case_count']} cases with k in (0, 2], {s['violations']} flagged, {s['confirmed_violations']} confirmed")


def test_ac13_muirhead_scan(tmp_path):
    code, s = scan(tmp_path, "--mode", "muirhead", "--type", "A", "--rank", "3", "--cases", "500", "--seed", "13")
    record(13, "monomial symmetric (k = 0) scan A3", code == 0, f"exit {code}, {s['case_count']} cases, {s['violations']} flagged")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
