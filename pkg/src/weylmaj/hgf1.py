"""Rank-one hypergeometric functions through the Gauss function 2F1."""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

PFAFF_THRESHOLD = -0.5
SERIES_CUTOFF = 0.95
MAX_TERMS = 200_000


class SeriesNotConverged(ArithmeticError):
    pass


def _is_nonpositive_int(c):
    return c <= 0 and float(c).is_integer()


def _series(a, b, c, z, rtol=1e-17):
    """Power series of 2F1 for |z| < 1 with a tail-bound stopping rule.

    Alternating series can cancel badly; when the largest term dwarfs the
    sum, the same series is re-summed with enough extra digits.
    """
    total, biggest = _series_terms(a, b, c, z, rtol, float, math.fsum)
    if total == 0 or biggest / abs(total) > 1e3:
        digits = 20 + int(math.log10(biggest / max(abs(total), 1e-300)) + 1)
        with mpmath.workdps(digits):
            total, _ = _series_terms(mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(c), mpmath.mpf(z), rtol, mpmath.mpf, mpmath.fsum)
        return float(total)
    return total


def _series_terms(a, b, c, z, rtol, num, fsum):
    term = num(1)
    parts = [term]
    running = 1.0
    biggest = 1.0
    settle = max(abs(float(a)), abs(float(b)), abs(float(c))) + 2
    for n in range(MAX_TERMS):
        if a + n == 0 or b + n == 0:
            return fsum(parts), biggest
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        parts.append(term)
        t = abs(float(term))
        running += float(term)
        biggest = max(biggest, t)
        # once the term ratio settles below one, the remaining tail is bounded geometrically
        q = abs(float((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2)) * z))
        if n > settle and q < 1 and t * q / (1 - q) <= rtol * max(abs(running), 1e-300):
            return fsum(parts), biggest
    raise SeriesNotConverged(f"2F1({a}, {b}; {c}; {z}) series did not converge")


def gauss_2f1(a, b, c, z, method: str = "auto") -> float:
    """Gauss hypergeometric function for real parameters and z <= 0.

    ``method`` selects ``direct`` (power series, -1 < z <= 0), ``pfaff``
    (series in w = z / (z - 1) after the Pfaff transformation) or ``auto``.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if _is_nonpositive_int(c):
        raise ValueError(f"c = {c} is a pole of 2F1")
    if z > 0:
        raise ValueError("only z <= 0 is supported")
    if z == 0 or a == 0 or b == 0:
        return 1.0
    if method == "auto":
        method = "direct" if z >= PFAFF_THRESHOLD else "pfaff"
    if method == "direct":
        if z <= -1:
            raise ValueError("direct series needs z > -1")
        return _series(a, b, c, z)
    if method != "pfaff":
        raise ValueError(f"unknown method {method!r}")
    w = z / (z - 1)
    if w > SERIES_CUTOFF:
        # too close to the unit circle for a plain series
        with mpmath.workdps(30):
            return float(mpmath.hyp2f1(a, b, c, z))
    return (1 - z) ** (-a) * _series(a, c - b, c, w)


@dataclass(frozen=True)
class Rank1Params:
    k1: float
    k2: float
    lam: float
    x: float

    def __post_init__(self):
        if self.k1 < 0 or self.k2 < 0:
            raise ValueError("multiplicities must be nonnegative")

    @property
    def rho(self):
        return self.k1 / 2 + self.k2


def f_rank1(p: Rank1Params, method: str = "auto") -> float:
    """F_{k,lam}(x) = 2F1(rho + lam, rho - lam; k1 + k2 + 1/2; -sinh^2(x/2))."""
    z = -math.sinh(p.x / 2) ** 2
    return gauss_2f1(p.rho + p.lam, p.rho - p.lam, p.k1 + p.k2 + 0.5, z, method)


def ode_check(p: Rank1Params, x_grid) -> float:
    """Max residual of F'' + (k1 coth(x/2) + 2 k2 coth x) F' + (rho^2 - lam^2) F.

    Derivatives come from 5-point central differences, so the check is
    independent of how F is evaluated.
    """
    worst = 0.0
    for x in x_grid:
        if x == 0:
            raise ValueError("the grid must avoid x = 0")
        h = 1e-4 * max(1.0, abs(x))
        f = [f_rank1(Rank1Params(p.k1, p.k2, p.lam, x + j * h)) for j in (-2, -1, 0, 1, 2)]
        d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)
        d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
        coef = p.k1 / math.tanh(x / 2) + 2 * p.k2 / math.tanh(x)
        res = d2 + coef * d1 + (p.rho**2 - p.lam**2) * f[2]
        worst = max(worst, abs(res) / max(1.0, abs(f[2])))
    return worst


@dataclass(frozen=True)
class Rank1Verdict:
    majorizes: bool
    inequality_holds: bool
    strict_where_expected: bool
    worst_x: float
    worst_margin: float

    @property
    def consistent(self) -> bool:
        return self.majorizes == self.inequality_holds and self.strict_where_expected


def rank1_majorization_check(k1, k2, lam, mu, x_grid, tol: float = 1e-10) -> Rank1Verdict:
    """|lam| >= |mu| against F_lam >= F_mu on the grid (strict off x = 0 when |lam| > |mu|)."""
    maj = abs(lam) >= abs(mu)
    holds, strict = True, True
    worst, worst_x = math.inf, 0.0
    for x in x_grid:
        fl = f_rank1(Rank1Params(k1, k2, lam, x))
        fm = f_rank1(Rank1Params(k1, k2, mu, x))
        margin = (fl - fm) / max(1.0, abs(fl), abs(fm))
        if margin < worst:
            worst, worst_x = margin, x
        if margin < -tol:
            holds = False
        if abs(lam) > abs(mu) and x != 0 and not fl > fm:
            strict = False
    return Rank1Verdict(maj, holds, strict, worst_x, worst)


__all__ = [
    "Rank1Params",
    "Rank1Verdict",
    "SeriesNotConverged",
    "f_rank1",
    "gauss_2f1",
    "ode_check",
    "rank1_majorization_check",
]
