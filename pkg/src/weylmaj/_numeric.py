"""Small numerical helpers shared across modules."""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import mpmath


def rationalize(x, tol: float = 1e-12) -> Fraction:
    """Snap ``x`` to the first continued-fraction convergent within ``tol``.

    Rationals pass through unchanged. This is the single float -> exact
    boundary used by the exact predicates.
    """
    if isinstance(x, Rational):
        return Fraction(x)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot rationalize {x!r}")
    exact = Fraction(x)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    rem = exact
    while True:
        a = math.floor(rem)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        approx = Fraction(h1, k1)
        if abs(approx - exact) <= tol:
            return approx
        frac = rem - a
        if frac == 0:
            return approx
        rem = 1 / frac


def as_fraction_vec(v, tol: float = 1e-12) -> tuple[Fraction, ...]:
    return tuple(rationalize(c, tol) for c in v)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        return rationalize(float(text))


def parse_vec(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(t) for t in text.split(",") if t.strip())


def signed_exp_sum(signs, exponents) -> tuple[float, float, float]:
    """Return ``(s, emax, cancel)`` with ``sum(sign * exp(e)) == s * exp(emax)``.

    ``cancel`` is ``|s| / sum(|terms|)`` after scaling; values near zero flag
    catastrophic cancellation.
    """
    exps = [float(e) for e in exponents]
    emax = max(exps)
    scaled = [sg * math.exp(e - emax) for sg, e in zip(signs, exps)]
    s = math.fsum(scaled)
    total = math.fsum(abs(t) for t in scaled)
    return s, emax, (abs(s) / total if total else 0.0)


def neville_at_zero(hs, values):
    """Polynomial extrapolation to h = 0 through ``(hs[i], values[i])``.

    Returns the full Neville tableau diagonal so callers can compare the
    last two orders as a convergence residual.
    """
    n = len(hs)
    table = list(values)
    diag = [table[-1]]
    for level in range(1, n):
        for i in range(n - level):
            h_i, h_j = hs[i], hs[i + level]
            table[i] = (h_j * table[i] - h_i * table[i + 1]) / (h_j - h_i)
        diag.append(table[0])
    return diag


def mp_to_float(x) -> float:
    return float(mpmath.re(x)) if isinstance(x, mpmath.mpc) else float(x)
