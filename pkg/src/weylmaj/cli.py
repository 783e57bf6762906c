"""Command-line front end.

Evaluation subcommands print one JSON object. ``conjecture-scan`` and
``cgss-check`` print one JSON line per case followed by a summary line.
Exit codes: 0 consistent, 2 violation found, 1 usage or numerical error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from . import compactfns as C
from . import exppoly as E
from . import hgf1 as G
from . import hopoly as H
from . import majorize as M
from . import orbital as O
from . import rootsys as R
from ._numeric import parse_rational, parse_vec

SCHEMA_VERSION = 1
RAY_TS = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
MODES = ("spectral", "rank1", "hciz", "schur", "muirhead")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(json.dumps({"error": message}), file=sys.stderr)
        raise SystemExit(1)


def _q(x) -> str:
    return str(Fraction(x))


def _qv(v) -> list:
    return [_q(c) for c in v]


def _label(args) -> R.RootSystem:
    try:
        return R.build(R.CartanLabel(args.type.upper(), int(args.rank)))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _vec(text, rs=None, name="vector"):
    v = parse_vec(text)
    if rs is not None and len(v) != rs.ambient_dim:
        raise UsageError(f"--{name} needs {rs.ambient_dim} coordinates for {rs.label}")
    return v


def _kparam(rs, text) -> R.MultiplicityParam:
    vals = parse_vec(text)
    try:
        return R.MultiplicityParam.of(rs, vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(obj, out):
    out.write(json.dumps(obj, sort_keys=True) + "\n")


# --------------------------------------------------------------------------
# evaluation subcommands


def cmd_majorize(args, out):
    rs = _label(args)
    lam = _vec(args.lam, rs, "lambda")
    mu = _vec(args.mu, rs, "mu")
    verdict = M.w_majorizes(rs, lam, mu)
    rec = {"command": "majorize", "root_system": str(rs.label), "lambda": _qv(lam), "mu": _qv(mu), "majorizes": verdict}
    if args.witness:
        wit = M.separating_functional(rs, lam, mu)
        rec["witness"] = None if wit is None else {"y": _qv(wit.y), "C": _q(wit.C), "margin": _q(wit.margin)}
    _emit(rec, out)
    return 0


def cmd_hciz(args, out):
    rs = _label(args)
    lam = _vec(args.lam, rs, "lambda")
    x = _vec(args.x, rs, "x")
    val = O.hc_eval(rs, lam, x)
    _emit({"command": "hciz", "root_system": str(rs.label), "lambda": _qv(lam), "x": _qv(x), "value": val}, out)
    return 0


def cmd_schur(args, out):
    shape = C.Partition(tuple(int(c) for c in args.shape.split(",") if c.strip()))
    x = parse_vec(args.x)
    if len(x) != args.n:
        raise UsageError(f"--x needs {args.n} coordinates")
    val = C.schur_normalized(shape, x)
    rec = {"command": "schur", "shape": list(shape.parts), "n": args.n, "x": _qv(x), "value": float(val)}
    if isinstance(val, Fraction):
        rec["exact"] = _q(val)
    _emit(rec, out)
    return 0


def _plan(rs, k, mode):
    try:
        return E.InnerProductPlan(k, mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _omega(text, rs):
    v = parse_vec(text)
    if len(v) != rs.rank or any(c.denominator != 1 or c < 0 for c in v):
        raise UsageError(f"--lambda needs {rs.rank} nonnegative integer fundamental-weight coordinates")
    return tuple(int(c) for c in v)


def cmd_ho_poly(args, out):
    rs = _label(args)
    k = _kparam(rs, args.k)
    lam = _omega(args.lam, rs)
    plan = _plan(rs, k, args.mode)
    p = H.ho_poly(rs, k, lam, plan)
    exact = plan.resolved_mode != "quadrature"
    coeffs = [
        {"mu": list(mu), "c": _q(c) if exact else float(c)}
        for mu, c in sorted(p.coeffs.items(), key=lambda kv: (-E.height(rs, kv[0]), tuple(-x for x in kv[0])))
    ]
    _emit(
        {
            "command": "ho-poly",
            "root_system": str(rs.label),
            "k": _qv(k.values),
            "lambda": list(lam),
            "mode": plan.resolved_mode,
            "coefficients": coeffs,
        },
        out,
    )
    return 0


def cmd_hgf_eval(args, out):
    rs = _label(args)
    k = _kparam(rs, args.k)
    lam = _omega(args.lam, rs)
    x = _vec(args.x, rs, "x")
    val = H.f_spectral(rs, k, lam, x, _plan(rs, k, args.mode))
    _emit({"command": "hgf-eval", "root_system": str(rs.label), "k": _qv(k.values), "lambda": list(lam), "x": _qv(x), "value": val}, out)
    return 0


def cmd_hgf1(args, out):
    p = G.Rank1Params(float(parse_rational(args.k1)), float(parse_rational(args.k2)), float(parse_rational(args.lam)), float(parse_rational(args.x)))
    _emit({"command": "hgf1", "k1": p.k1, "k2": p.k2, "lambda": p.lam, "x": p.x, "value": G.f_rank1(p)}, out)
    return 0


# --------------------------------------------------------------------------
# scans


@dataclass
class ScanContext:
    mode: str
    rs: R.RootSystem | None
    k_spec: str | None
    directions: int
    tol: float
    fault: int | None
    base_seed: int
    cache: dict = field(default_factory=dict)


def _rng(seed, idx):
    return np.random.default_rng(np.random.SeedSequence([seed, idx]))


def _rand_q(rng, lo, hi, den):
    return Fraction(int(rng.integers(lo * den, hi * den + 1)), den)


def _dominant_directions(rs, rng, count):
    out = []
    for _ in range(count):
        c = [Fraction(int(rng.integers(1, 9)), 8) for _ in range(rs.rank)]
        y = rs.zero()
        for ci, w in zip(c, rs.fundamental_weights):
            y = R.vadd(y, R.vscale(ci, w))
        out.append(y)
    return out


def _random_dominant(rs, rng, hi=3, den=4):
    while True:
        c = [_rand_q(rng, 0, hi, den) for _ in range(rs.rank)]
        if any(c):
            v = rs.zero()
            for ci, w in zip(c, rs.fundamental_weights):
                v = R.vadd(v, R.vscale(ci, w))
            return v


def _convex_combination(rs, rng, lam, den=16):
    orbit = R.weyl_orbit(rs, lam)
    cuts = sorted(int(c) for c in rng.integers(0, den + 1, size=len(orbit) - 1))
    weights = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    mu = rs.zero()
    for w, p in zip(weights, orbit):
        if w:
            mu = R.vadd(mu, R.vscale(Fraction(w, den), p))
    return R.dominant_rep(rs, mu)[0]


def _points(rs, dirs, witness_y, lam, mu):
    """Grid points t*y plus the separating ray, capped to keep exponents finite."""
    pts = [tuple(float(t) * float(c) for c in y) for y in dirs for t in RAY_TS]
    if witness_y is not None:
        reach = max(abs(float(R.dot(lam, witness_y))), abs(float(R.dot(mu, witness_y))), 1e-9)
        t = 1.0
        while t * reach <= 400:
            pts.append(tuple(t * float(c) for c in witness_y))
            t *= 2
    return pts


def _compare(f_lam, f_mu, pts, majorizes):
    """Relative consistency margin over the points and the worst point."""
    best, best_pt = None, None
    for x in pts:
        a, b = f_lam(x), f_mu(x)
        scale = max(1.0, abs(a), abs(b))
        d = (a - b) / scale if majorizes else (b - a) / scale
        if best is None or (d < best if majorizes else d > best):
            best, best_pt = d, x
    return best, best_pt


def _sample_pair(rs, rng, idx, lam):
    if idx % 2 == 0:
        return _convex_combination(rs, rng, lam), True
    for _ in range(200):
        mu = _random_dominant(rs, rng)
        if not M.w_majorizes(rs, lam, mu):
            return mu, False
    return R.vscale(Fraction(5, 4), lam), False


def _case_hciz(ctx, idx, rng, tight):
    rs = ctx.rs
    lam = _random_dominant(rs, rng)
    mu, maj = _sample_pair(rs, rng, idx, lam)
    dirs = _dominant_directions(rs, rng, ctx.directions)
    wit = None if maj else M.separating_functional(rs, lam, mu)
    cfg = O.OrbitalEvalConfig(perturbation_steps=tuple(10 ** (-2.5 - j / 2) for j in range(6))) if tight else O.DEFAULT_CONFIG
    pts = _points(rs, dirs, wit.y if wit else None, lam, mu)
    margin, pt = _compare(lambda x: O.hc_eval(rs, lam, x, cfg), lambda x: O.hc_eval(rs, mu, x, cfg), pts, maj)
    return {"lambda": _qv(lam), "mu": _qv(mu), "majorizes": maj, "margin": margin, "worst_point": list(pt), "points": len(pts)}


def _case_muirhead(ctx, idx, rng, tight):
    rs = ctx.rs
    n = rs.ambient_dim
    d = int(rng.integers(2, 9))
    parts = C.partitions(d, n)
    lam = parts[int(rng.integers(0, len(parts)))]
    below = [p for p in parts if C.partition_majorizes(lam, p)]
    above = [p for p in parts if not C.partition_majorizes(lam, p)]
    maj = idx % 2 == 0 or not above
    pool = below if maj else above
    mu = pool[int(rng.integers(0, len(pool)))]
    lv = tuple(Fraction(c) for c in lam.padded(n))
    mv = tuple(Fraction(c) for c in mu.padded(n))
    dirs = _dominant_directions(rs, rng, ctx.directions)
    wit = None if maj else M.separating_functional(rs, lv, mv)
    pts = _points(rs, dirs, wit.y if wit else None, lv, mv)
    margin, pt = _compare(lambda x: H.orbit_mean_exponential(rs, lv, x), lambda x: H.orbit_mean_exponential(rs, mv, x), pts, maj)
    return {"lambda": list(lam.padded(n)), "mu": list(mu.padded(n)), "majorizes": maj, "margin": margin, "worst_point": list(pt), "points": len(pts)}


def _case_schur(ctx, idx, rng, tight):
    n = ctx.rs.ambient_dim
    d = int(rng.integers(1, 7))
    parts = C.partitions(d, n)
    lam = parts[int(rng.integers(0, len(parts)))]
    below = [p for p in parts if C.partition_majorizes(lam, p)]
    above = [p for p in parts if not C.partition_majorizes(lam, p)]
    maj = idx % 2 == 0 or not above
    pool = below if maj else above
    mu = pool[int(rng.integers(0, len(pool)))]
    v = C.cgss_verdict(lam, mu, n, tol=ctx.tol / (100 if tight else 1))
    margin = v.relative_margin if maj else -v.relative_margin
    return {
        "lambda": list(lam.padded(n)),
        "mu": list(mu.padded(n)),
        "majorizes": maj,
        "margin": margin,
        "worst_point": _qv(v.worst_point) if v.worst_point else None,
        "points": len(C.default_grid(n)),
    }


def _sample_k(ctx, rs, rng):
    if ctx.k_spec:
        return _kparam(rs, ctx.k_spec)
    return R.MultiplicityParam(tuple(Fraction(int(rng.integers(1, 17)), 8) for _ in range(rs.n_orbits)))


def _case_spectral(ctx, idx, rng, tight):
    rs = ctx.rs
    k = _sample_k(ctx, rs, rng)
    lam = tuple(int(c) for c in rng.integers(0, 3, size=rs.rank))
    if not any(lam):
        lam = (1,) + lam[1:]
    lam_amb = E.to_ambient(rs, lam)
    if idx % 2 == 0:
        low = E.low_set(rs, lam)
        mu = low[int(rng.integers(0, len(low)))]
        maj = True
    else:
        maj = False
        mu = None
        for _ in range(200):
            cand = tuple(int(c) for c in rng.integers(0, 4, size=rs.rank))
            if not M.w_majorizes(rs, lam_amb, E.to_ambient(rs, cand)):
                mu = cand
                break
        if mu is None:
            mu = tuple(2 * c for c in lam)
    mu_amb = E.to_ambient(rs, mu)
    dirs = _dominant_directions(rs, rng, ctx.directions)
    wit = None if maj else M.separating_functional(rs, lam_amb, mu_amb)
    pts = _points(rs, dirs, wit.y if wit else None, lam_amb, mu_amb)
    plan = E.InnerProductPlan(k)
    key_l, key_m = ("P", k.values, lam), ("P", k.values, mu)
    for key, wt in ((key_l, lam), (key_m, mu)):
        if key not in ctx.cache:
            ctx.cache[key] = H.ho_poly(rs, k, wt, plan)
    fl = lambda x: H.f_spectral(rs, k, lam, x, poly=ctx.cache[key_l])
    fm = lambda x: H.f_spectral(rs, k, mu, x, poly=ctx.cache[key_m])
    margin, pt = _compare(fl, fm, pts, maj)
    return {
        "k": _qv(k.values),
        "lambda": list(lam),
        "mu": list(mu),
        "majorizes": maj,
        "margin": margin,
        "worst_point": list(pt),
        "points": len(pts),
    }


def _case_rank1(ctx, idx, rng, tight):
    k1 = float(Fraction(int(rng.integers(0, 17)), 8))
    k2 = float(Fraction(int(rng.integers(0, 17)), 8))
    while True:
        a, b = float(_rand_q(rng, -4, 4, 8)), float(_rand_q(rng, -4, 4, 8))
        if abs(a) != abs(b):
            break
    big, small = (a, b) if abs(a) > abs(b) else (b, a)
    maj = idx % 2 == 0
    lam, mu = (big, small) if maj else (small, big)
    grid = list(RAY_TS)
    v = G.rank1_majorization_check(k1, k2, lam, mu, grid, tol=ctx.tol / (100 if tight else 1))
    rec = {
        "k": [k1, k2],
        "lambda": lam,
        "mu": mu,
        "majorizes": maj,
        "margin": v.worst_margin if maj else -v.worst_margin,
        "worst_point": [v.worst_x],
        "points": len(grid),
    }
    if maj and not v.strict_where_expected:
        rec["strict_failure"] = True
    return rec


CASES = {
    "hciz": _case_hciz,
    "muirhead": _case_muirhead,
    "schur": _case_schur,
    "spectral": _case_spectral,
    "rank1": _case_rank1,
}


def _run_case(ctx, idx, tight=False):
    rng = _rng(ctx.base_seed, idx)
    rec = CASES[ctx.mode](ctx, idx, rng, tight)
    if ctx.fault is not None and idx == ctx.fault:
        rec["margin"] = -abs(rec["margin"]) - 1.0
        rec["fault_injected"] = True
    tol = ctx.tol / (100 if tight else 1)
    if rec["majorizes"]:
        ok = rec["margin"] >= -tol
    else:
        ok = rec["margin"] > tol
    if rec.get("strict_failure"):
        ok = False
    rec["consistent"] = ok
    return {"case": idx, "seed": [ctx.base_seed, idx], **rec}


def _workers():
    try:
        return max(1, int(os.environ.get("WEYLMAJ_THREADS", "1")))
    except ValueError:
        return 1


def _check_mode(args):
    mode = args.mode
    if mode == "rank1":
        return None
    rs = _label(args)
    if mode in ("muirhead", "schur") and rs.label.family != "A":
        raise UsageError(f"mode {mode} needs type A")
    if mode == "hciz" and not rs.reduced:
        raise UsageError("mode hciz needs a reduced root system")
    return rs


def cmd_conjecture_scan(args, out):
    start = time.perf_counter()
    rs = _check_mode(args)
    if args.cases < 1:
        raise UsageError("--cases must be positive")
    ctx = ScanContext(args.mode, rs, args.k, args.grid, args.tol, args.inject_fault, args.seed)
    idxs = range(args.cases)
    workers = _workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(lambda i: _run_case(ctx, i), idxs))
    else:
        records = [_run_case(ctx, i) for i in idxs]
    flagged = [r["case"] for r in records if not r["consistent"]]
    # a violation is only surfaced if it survives a tighter re-run
    confirmed = [i for i in flagged if not _run_case(ctx, i, tight=True)["consistent"]]
    for r in records:
        if not r["consistent"]:
            r["confirmed"] = r["case"] in confirmed
        _emit({"type": "case", **r}, out)
    summary = {
        "type": "summary",
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": ["conjecture-scan"] + _echo(args),
        "mode": args.mode,
        "root_system": None if rs is None else str(rs.label),
        "k": args.k,
        "rng_seed": args.seed,
        "case_count": args.cases,
        "grid": {"directions": args.grid, "ts": list(RAY_TS)},
        "tolerance": args.tol,
        "violations": len(flagged),
        "confirmed_violations": len(confirmed),
        "min_margin": min(r["margin"] for r in records),
    }
    if args.timing:
        summary["wall_time"] = time.perf_counter() - start
    _emit(summary, out)
    if args.csv:
        _write_csv(args.csv, records)
    return 2 if confirmed else 0


def _echo(args):
    out = []
    for key in ("type", "rank", "k", "cases", "grid", "seed", "mode", "tol"):
        val = getattr(args, key, None)
        if val is not None:
            out += [f"--{key}", str(val)]
    return out


def _write_csv(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["case", "majorizes", "margin", "consistent", "lambda", "mu"])
        for r in records:
            w.writerow([r["case"], r["majorizes"], repr(r["margin"]), r["consistent"], json.dumps(r["lambda"]), json.dumps(r["mu"])])


def cmd_cgss_check(args, out):
    n, dmax = args.n, args.d
    records = []
    for d in range(1, dmax + 1):
        ps = C.partitions(d, n)
        for lam in ps:
            for mu in ps:
                v = C.cgss_verdict(lam, mu, n, tol=args.tol)
                records.append(
                    {
                        "type": "case",
                        "lambda": list(lam.parts),
                        "mu": list(mu.parts),
                        "majorizes": v.majorizes,
                        "inequality_holds": v.inequality_holds,
                        "worst_margin": _q(v.worst_margin) if isinstance(v.worst_margin, Fraction) else float(v.worst_margin),
                        "worst_point": _qv(v.worst_point) if v.worst_point else None,
                        "consistent": v.consistent,
                    }
                )
    for r in records:
        _emit(r, out)
    bad = sum(not r["consistent"] for r in records)
    _emit({"type": "summary", "schema_version": SCHEMA_VERSION, "tool_version": __version__, "n": n, "max_degree": dmax, "pairs": len(records), "mismatches": bad}, out)
    return 2 if bad else 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weylmaj", description="Root-system majorization and spherical-function tools.")
    p.add_argument("--version", action="version", version=f"weylmaj {__version__}")
    p.add_argument("--output", help="write output to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def typed(sp):
        sp.add_argument("--type", required=True, help="root system family (A, B, C, D, BC, G, F, E)")
        sp.add_argument("--rank", required=True, type=int)

    sp = sub.add_parser("majorize", help="decide W-majorization of two vectors")
    typed(sp)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--mu", required=True)
    sp.add_argument("--witness", action="store_true", help="include a separating functional when not majorized")
    sp.set_defaults(func=cmd_majorize)

    sp = sub.add_parser("hciz", help="orbital integral by the Harish-Chandra formula")
    typed(sp)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--x", required=True)
    sp.set_defaults(func=cmd_hciz)

    sp = sub.add_parser("schur", help="normalized Schur polynomial")
    sp.add_argument("--shape", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--x", required=True)
    sp.set_defaults(func=cmd_schur)

    for name, func, help_text in (
        ("ho-poly", cmd_ho_poly, "Heckman-Opdam polynomial coefficients on the monomial basis"),
        ("hgf-eval", cmd_hgf_eval, "hypergeometric function at a spectral point lambda + rho_k"),
    ):
        sp = sub.add_parser(name, help=help_text)
        typed(sp)
        sp.add_argument("--k", required=True, help="multiplicities per root orbit (one value applies to all)")
        sp.add_argument("--lambda", dest="lam", required=True, help="fundamental-weight coordinates")
        sp.add_argument("--mode", default="auto", choices=["auto", "exact", "fourier", "quadrature"])
        if name == "hgf-eval":
            sp.add_argument("--x", required=True)
        sp.set_defaults(func=func)

    sp = sub.add_parser("hgf1", help="rank-one hypergeometric function")
    sp.add_argument("--k1", required=True)
    sp.add_argument("--k2", default="0")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--x", required=True)
    sp.set_defaults(func=cmd_hgf1)

    sp = sub.add_parser("cgss-check", help="partition majorization vs Schur inequalities for all pairs")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--d", type=int, default=6, help="largest partition size")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.set_defaults(func=cmd_cgss_check)

    sp = sub.add_parser("conjecture-scan", help="seeded scan for violations of the majorization inequalities")
    sp.add_argument("--type", default="A")
    sp.add_argument("--rank", type=int, default=1)
    sp.add_argument("--k", default=None, help="fixed multiplicities (spectral mode samples k when omitted)")
    sp.add_argument("--cases", type=int, default=100)
    sp.add_argument("--grid", type=int, default=3, help="number of dominant grid directions")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=MODES, required=True)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--csv", help="also write per-case rows to this CSV file")
    sp.add_argument("--timing", action="store_true", help="add wall time to the summary (breaks byte-identity)")
    sp.add_argument("--inject-fault", type=int, default=None, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_conjecture_scan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1
    except (ArithmeticError, ValueError, R.EnumerationBoundExceeded) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 1
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    raise SystemExit(main())
