"""Laplace transforms of orbit measures: Harish-Chandra formula and a Haar Monte Carlo oracle."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import rootsys as R
from ._numeric import neville_at_zero


class ExtrapolationDiverged(ArithmeticError):
    pass


@dataclass(frozen=True)
class OrbitalEvalConfig:
    degeneracy_tolerance: float = 1e-10
    perturbation_steps: tuple = (1e-2, 10**-2.5, 1e-3, 10**-3.5, 1e-4)
    extrapolation_rtol: float = 1e-8
    mc_samples: int = 1_000_000
    mc_chunk: int = 20_000
    rng_seed: int = 0
    workers: int = field(default_factory=lambda: int(os.environ.get("WEYLMAJ_THREADS", "1") or 1))

    def __post_init__(self):
        steps = self.perturbation_steps
        if not steps or any(s <= 0 for s in steps) or any(a <= b for a, b in zip(steps, steps[1:])):
            raise ValueError("perturbation steps must be positive and strictly decreasing")


DEFAULT_CONFIG = OrbitalEvalConfig()


def _weyl_arrays(rs):
    """Stacked float matrices and signs of W, cached on the root system."""
    if "weyl_np" not in rs.cache:
        grp = R.weyl_group(rs)
        mats = np.array([[[float(c) for c in row] for row in w.matrix] for w in grp.elements])
        signs = np.array([w.sign for w in grp.elements], dtype=float)
        rs.cache["weyl_np"] = (mats, signs, grp.elements)
    return rs.cache["weyl_np"]


def _scale(v):
    return max([abs(float(c)) for c in v] + [0.0])


def _is_degenerate(rs, v, tol):
    s = _scale(v)
    if s == 0:
        return True
    span = R.project_to_span(rs, tuple(Fraction(c) if not isinstance(c, float) else c for c in v))
    s = max(_scale(span), 1e-300)
    d = abs(float(R.discriminant(rs, span)))
    return d <= tol * s ** len(rs.positive_roots)


def _mpf(c):
    if isinstance(c, float):
        return mpmath.mpf(c)
    c = Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def _regular_eval(rs, lam, x):
    """Harish-Chandra formula for regular lam, x in span(Phi).

    The alternating sum is at least |Delta(lam) Delta(x) / Delta(rho)| (the
    transform is >= 1 on span(Phi)), which bounds the digits lost to
    cancellation; mpmath is used with that many extra digits when needed.
    """
    mats, signs, elements = _weyl_arrays(rs)
    lam_f = np.array([float(c) for c in lam])
    x_f = np.array([float(c) for c in x])
    exps = (mats @ lam_f) @ x_f
    roots = np.array([[float(c) for c in a] for a in rs.positive_roots])
    d_rho = float(R.discriminant(rs, R.rho(rs)))
    denom = float(np.prod(roots @ lam_f) * np.prod(roots @ x_f)) / d_rho
    emax = float(np.max(exps))
    lost = (emax + math.log(len(exps))) / math.log(10) - math.log10(max(abs(denom), 1e-300))
    if lost < 3:
        val = math.fsum(s * math.exp(e - emax) for s, e in zip(signs, exps))
        return val / denom * math.exp(emax)
    with mpmath.workdps(int(lost) + 25):
        lam_m = [_mpf(c) for c in lam]
        x_m = [_mpf(c) for c in x]
        total = mpmath.mpf(0)
        for w in elements:
            wl = [mpmath.fsum(_mpf(c) * v for c, v in zip(row, lam_m)) for row in w.matrix]
            total += w.sign * mpmath.exp(mpmath.fsum(a * b for a, b in zip(wl, x_m)))
        d_lam = mpmath.fprod(mpmath.fsum(_mpf(c) * v for c, v in zip(a, lam_m)) for a in rs.positive_roots)
        d_x = mpmath.fprod(mpmath.fsum(_mpf(c) * v for c, v in zip(a, x_m)) for a in rs.positive_roots)
        return float(total * d_rho / (d_lam * d_x))


def hc_eval(rs, lam, x, cfg: OrbitalEvalConfig = DEFAULT_CONFIG) -> float:
    """L_lam(x) = Delta(rho) / (Delta(lam) Delta(x)) sum_w eps(w) e^{<w lam, x>}.

    Degenerate lam or x are evaluated along lam + eta rho, x + eta rho and
    extrapolated to eta = 0.
    """
    if not rs.reduced:
        raise ValueError(f"{rs.label} is not reduced; the orbital formula needs a reduced system")
    if len(lam) != rs.ambient_dim or len(x) != rs.ambient_dim:
        raise ValueError(f"expected vectors of length {rs.ambient_dim}")
    lam_span = R.project_to_span(rs, tuple(_exact(c) for c in lam))
    x_span = R.project_to_span(rs, tuple(_exact(c) for c in x))
    fixed = math.exp(float(R.dot(R.vsub(tuple(_exact(c) for c in lam), lam_span), R.vsub(tuple(_exact(c) for c in x), x_span))))
    if _scale(lam_span) == 0 or _scale(x_span) == 0:
        return fixed
    deg_l = _is_degenerate(rs, lam_span, cfg.degeneracy_tolerance)
    deg_x = _is_degenerate(rs, x_span, cfg.degeneracy_tolerance)
    if not (deg_l or deg_x):
        return fixed * _regular_eval(rs, lam_span, x_span)
    rho = R.rho(rs)
    rho_f = [float(c) for c in rho]
    rho_n = math.sqrt(sum(c * c for c in rho_f))
    # keep the shift of every exponent <w lam, x> at about eps, whatever the size of lam and x
    spread = max(1.0, _scale(lam_span) * _scale(x_span))
    hs, vals = [], []
    for eps in cfg.perturbation_steps:
        l2, x2 = list(map(float, lam_span)), list(map(float, x_span))
        if deg_l:
            eta = eps * _scale(lam_span) / (rho_n * spread)
            l2 = [a + eta * b for a, b in zip(l2, rho_f)]
        if deg_x:
            eta = eps * _scale(x_span) / (rho_n * spread)
            x2 = [a + eta * b for a, b in zip(x2, rho_f)]
        hs.append(eps)
        vals.append(_regular_eval(rs, l2, x2))
    diag = neville_at_zero(hs, vals)
    best = diag[-1]
    resid = abs(diag[-1] - diag[-2]) / max(abs(best), 1e-300)
    if not math.isfinite(best) or resid > cfg.extrapolation_rtol:
        raise ExtrapolationDiverged(f"degenerate-limit residual {resid:.3g} above {cfg.extrapolation_rtol}")
    return fixed * best


def _exact(c):
    return c if isinstance(c, float) else Fraction(c)


def l_asymptotic_leading(rs, lam, x, t) -> float:
    """[Delta(rho) / Delta(t x)] e^{t <lam, x>} / Delta(lam) for dominant regular lam, x."""
    if not (R.is_dominant(rs, lam) and R.is_dominant(rs, x)):
        raise ValueError("lam and x must be dominant")
    d_lam = float(R.discriminant(rs, lam))
    d_x = float(R.discriminant(rs, x)) * t ** len(rs.positive_roots)
    if d_lam == 0 or d_x == 0:
        raise ValueError("lam and x must be regular")
    return float(R.discriminant(rs, R.rho(rs))) / d_x * math.exp(t * float(R.dot(lam, x))) / d_lam


# --------------------------------------------------------------------------
# Monte Carlo over U(n)


def haar_unitary_moduli(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    """|U_ij|^2 for ``size`` Haar-distributed unitaries (QR with phase fix)."""
    z = (rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    q = q * (d / np.abs(d))[:, None, :]
    return np.abs(q) ** 2


def _mc_chunk(seed, chunk, size, n, lam, x):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))
    p = haar_unitary_moduli(rng, size, n)
    # tr(U diag(lam) U^* diag(x)) = sum_ij x_i |U_ij|^2 lam_j
    vals = np.exp(np.einsum("i,sij,j->s", x, p, lam))
    return math.fsum(vals), math.fsum(vals * vals), size


def mc_unitary_oracle(n: int, lam, x, cfg: OrbitalEvalConfig = DEFAULT_CONFIG):
    """Monte Carlo estimate of the unitary orbital integral; returns (mean, stderr).

    Samples are split into fixed-size chunks with seeds derived from
    (rng_seed, chunk index), so the result does not depend on the worker count.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    lam = np.array([float(c) for c in lam])
    x = np.array([float(c) for c in x])
    if lam.shape != (n,) or x.shape != (n,):
        raise ValueError(f"lam and x must have length {n}")
    if n == 1:
        return math.exp(lam[0] * x[0]), 0.0
    total = cfg.mc_samples
    sizes = [min(cfg.mc_chunk, total - s) for s in range(0, total, cfg.mc_chunk)]
    jobs = [(cfg.rng_seed, i, sz, n, lam, x) for i, sz in enumerate(sizes)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(lambda j: _mc_chunk(*j), jobs))
    else:
        parts = [_mc_chunk(*j) for j in jobs]
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / total
    var = max(s2 / total - mean * mean, 0.0) * total / max(total - 1, 1)
    return mean, math.sqrt(var / total)


__all__ = [
    "DEFAULT_CONFIG",
    "ExtrapolationDiverged",
    "OrbitalEvalConfig",
    "haar_unitary_moduli",
    "hc_eval",
    "l_asymptotic_leading",
    "mc_unitary_oracle",
]
