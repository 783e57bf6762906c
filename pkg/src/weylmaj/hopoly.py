"""Heckman-Opdam polynomials, c-functions and spectral-point hypergeometric values."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import exppoly as E
from . import rootsys as R
from ._linalg import SingularMatrixError, nullspace, solve
from ._numeric import neville_at_zero


class GammaPole(ArithmeticError):
    pass


class NotConverged(ArithmeticError):
    pass


@dataclass(frozen=True)
class HOPoly:
    lam: tuple  # omega-coordinates
    k: R.MultiplicityParam
    coeffs: dict  # mu -> c_{lambda mu} on the M basis
    as_exppoly: E.ExpPoly

    def coefficient(self, mu):
        return self.coeffs.get(tuple(mu), 0)


def _coords(rs, lam):
    """Validate a lattice point given in fundamental-weight coordinates."""
    lam = tuple(lam)
    if len(lam) != rs.rank:
        raise ValueError(f"expected {rs.rank} fundamental-weight coordinates, got {len(lam)}")
    if any(Fraction(c).denominator != 1 for c in lam):
        raise R.NotInLattice(f"{lam} has non-integral coordinates")
    return tuple(int(c) for c in lam)


def _assemble(rs, lam, coeffs):
    out = E.ExpPoly({}, rs.rank)
    for mu, c in coeffs.items():
        out = out + E.monomial_symmetric(rs, mu).scale(c)
    return out


def _default_plan(rs, k):
    return E.InnerProductPlan(k)


def _on_boundary(k):
    """Some root orbits carry k = 0 and others do not."""
    vals = k.values
    return any(v == 0 for v in vals) and not all(v == 0 for v in vals)


def ho_poly(rs, k: R.MultiplicityParam, lam, plan: E.InnerProductPlan | None = None) -> HOPoly:
    """Gram solve: P = M_lam + sum_{mu < lam} c_mu M_mu orthogonal to every lower M_mu.

    ``lam`` is given in fundamental-weight coordinates.
    """
    lam = _coords(rs, lam)
    if any(x < 0 for x in lam):
        raise ValueError(f"{lam} is not dominant")
    plan = plan or _default_plan(rs, k)
    if k.is_zero():
        return HOPoly(lam, k, {lam: Fraction(1)}, E.monomial_symmetric(rs, lam))
    low = E.low_set(rs, lam)
    lower = low[1:]
    if not lower:
        return HOPoly(lam, k, {lam: Fraction(1)}, E.monomial_symmetric(rs, lam))
    w = E.WeightCoefficients(rs, plan)
    ms = {mu: E.monomial_symmetric(rs, mu) for mu in low}
    gram = [[E.inner_product_k(rs, ms[mu], ms[nu], plan, w) for mu in lower] for nu in lower]
    rhs = [-E.inner_product_k(rs, ms[lam], ms[nu], plan, w) for nu in lower]
    if plan.resolved_mode == "quadrature":
        g = np.array(gram, dtype=float)
        b = np.array(rhs, dtype=float)
        if np.linalg.cond(g) > 1e12:
            raise SingularMatrixError("Gram matrix is numerically singular")
        c = np.linalg.solve(g, b)
        resid = np.max(np.abs(g @ c - b)) / max(1.0, np.max(np.abs(b)))
        if resid > 1e-9:
            raise SingularMatrixError(f"Gram solve residual {resid:.3g}")
        sol = [float(x) for x in c]
    else:
        sol = solve(gram, rhs)
    coeffs = {lam: Fraction(1)}
    coeffs.update((mu, c) for mu, c in zip(lower, sol) if c != 0)
    return HOPoly(lam, k, coeffs, _assemble(rs, lam, coeffs))


def ho_poly_laplacian(rs, k: R.MultiplicityParam, lam) -> HOPoly:
    """Same polynomial from the eigen-equation of the Heckman-Opdam Laplacian.

    Coefficients m_mu of e^mu satisfy, for mu below lam,
      (|lam + rho_k|^2 - |mu + rho_k|^2) m_mu = 2 sum_{a>0} k_a sum_{j>=1} <mu + j a, a> m_{mu + j a}
    with m W-invariant. Cheap enough for the large weights used by ``bessel``.
    """
    lam = _coords(rs, lam)
    if any(x < 0 for x in lam):
        raise ValueError(f"{lam} is not dominant")
    data = E.lattice_data(rs)
    low = E.low_set(rs, lam)
    lowset = set(low)
    rk = [E._as_number(v) for v in (R.k_of_root(rs, k, i) for i in range(len(rs.positive_roots)))]
    rho_amb = R.rho_k(rs, k)
    rho_w = tuple(R.dot(rho_amb, R.coroot(b)) for b in rs.lattice_simple_roots)

    def shifted_norm(mu):
        v = tuple(a + b for a, b in zip(mu, rho_w))
        return E.pair(rs, v, v)

    top = shifted_norm(lam)
    m = {lam: Fraction(1)}
    for mu in low[1:]:
        acc = 0
        for kk, a in zip(rk, data.pos_roots):
            if kk == 0:
                continue
            j = 1
            while True:
                nu = tuple(x + j * t for x, t in zip(mu, a))
                nd = E.dominant_coords(rs, nu)
                if nd not in lowset:
                    break
                acc += kk * E.pair(rs, nu, a) * m[nd]
                j += 1
        m[mu] = 2 * acc / (top - shifted_norm(mu))
    m = {mu: c for mu, c in m.items() if c != 0}
    return HOPoly(lam, k, m, _assemble(rs, lam, m))


def ho_poly_cherednik_oracle(rs, k: R.MultiplicityParam, lam, plan=None, y=None, bound: int = 400) -> HOPoly:
    """Cross-check: joint eigenvector of the Cherednik operators, symmetrized."""
    lam = _coords(rs, lam)
    low = E.low_set(rs, lam)
    basis = []
    for mu in low:
        basis.extend(E.orbit_coords(rs, mu))
    if len(basis) > bound:
        raise ValueError(f"oracle basis of size {len(basis)} exceeds bound {bound}")
    index = {nu: i for i, nu in enumerate(basis)}
    ys = [y] if y is not None else []
    # generic rational directions: the fundamental weights plus a skew mix
    for i, w in enumerate(rs.fundamental_weights):
        ys.append(tuple(c * Fraction(2 * i + 3, 7) for c in w))
    rows = []
    for yy in ys:
        mat = [[Fraction(0)] * len(basis) for _ in basis]
        for col, nu in enumerate(basis):
            img = E.cherednik_apply(rs, k, yy, E.ExpPoly.monomial(nu))
            for v, c in img.terms.items():
                if v not in index:
                    raise ValueError("Cherednik operator left the W.low(lambda) span")
                mat[index[v]][col] += c
        ev = mat[index[lam]][index[lam]]
        for i, row in enumerate(mat):
            rows.append([c - (ev if i == j else 0) for j, c in enumerate(row)])
    null = nullspace(rows)
    if len(null) != 1:
        raise ArithmeticError(f"joint eigenspace has dimension {len(null)}, expected 1")
    vec = null[0]
    g = E.ExpPoly({nu: vec[i] for i, nu in enumerate(basis)}, rs.rank)
    sym = E.symmetrize(rs, g)
    lead = sym.coeff(lam)
    if lead == 0:
        raise ArithmeticError("symmetrized eigenvector has no leading term")
    sym = sym.scale(1 / lead)
    coeffs = {mu: sym.coeff(mu) for mu in low if sym.coeff(mu) != 0}
    return HOPoly(lam, k, coeffs, sym)


# --------------------------------------------------------------------------
# c-functions


def tilde_c(rs, k: R.MultiplicityParam, lam) -> float:
    """prod_{a>0} Gamma(<lam,a^v> + k_{a/2}/2) / Gamma(<lam,a^v> + k_{a/2}/2 + k_a)."""
    return float(_tilde_c_mp(rs, k, lam))


def _tilde_c_mp(rs, k, lam):
    with mpmath.workdps(30):
        out = mpmath.mpf(1)
        for i, a in enumerate(rs.positive_roots):
            ka = R.k_of_root(rs, k, i)
            if ka == 0:
                continue
            s = R.dot(lam, R.coroot(a)) + Fraction(1, 2) * E._as_number(R.k_half(rs, k, i))
            top = _mp(s)
            bot = _mp(s + E._as_number(ka))
            if _is_pole(top):
                raise GammaPole(f"Gamma pole at argument {top}")
            out *= mpmath.gamma(top) * mpmath.rgamma(bot)
        return out


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _is_pole(z):
    return z <= 0 and z == mpmath.floor(z)


def c_function(rs, k, lam) -> float:
    """c(lam, k) = tilde_c(lam, k) / tilde_c(rho_k, k)."""
    with mpmath.workdps(30):
        return float(_tilde_c_mp(rs, k, lam) / _tilde_c_mp(rs, k, R.rho_k(rs, k)))


# --------------------------------------------------------------------------
# spectral values


def orbit_mean_exponential(rs, lam_amb, x):
    """(1/|W|) sum_w e^{<w lam, x>}."""
    orbit = R.weyl_orbit(rs, tuple(Fraction(c) for c in lam_amb))
    order = R.weyl_group(rs).order
    stab = order // len(orbit)
    xs = [float(c) for c in x]
    exps = [sum(float(a) * b for a, b in zip(p, xs)) for p in orbit]
    emax = max(exps)
    return stab * math.fsum(math.exp(e - emax) for e in exps) * math.exp(emax) / order


def f_spectral(rs, k: R.MultiplicityParam, lam, x, plan=None, poly: HOPoly | None = None) -> float:
    """F_{k, lam + rho_k}(x) = c(lam + rho_k, k) P_{k,lam}(x) for lam in P+.

    When only some multiplicities vanish the Gamma-ratio constant is not
    reliable, so P is scaled by 1 / P(0) instead.
    """
    lam = _coords(rs, lam)
    if k.is_zero():
        return orbit_mean_exponential(rs, E.to_ambient(rs, lam), x)
    p = poly or ho_poly(rs, k, lam, plan)
    if _on_boundary(k):
        return E.evaluate(rs, p.as_exppoly, x) / E.evaluate(rs, p.as_exppoly, rs.zero())
    c = c_function(rs, k, R.vadd(E.to_ambient(rs, lam), R.rho_k(rs, k)))
    return c * E.evaluate(rs, p.as_exppoly, x)


def normalization_residual(rs, k, lam, plan=None) -> float:
    """|c(lam + rho_k) P_{k,lam}(0) - 1| (0 at k = 0, where F is the orbit mean)."""
    if k.is_zero():
        return abs(f_spectral(rs, k, lam, rs.zero()) - 1.0)
    p = ho_poly(rs, k, lam, plan)
    c = c_function(rs, k, R.vadd(E.to_ambient(rs, _coords(rs, lam)), R.rho_k(rs, k)))
    return abs(c * E.evaluate(rs, p.as_exppoly, rs.zero()) - 1.0)


@dataclass(frozen=True)
class BesselEstimate:
    value: float
    residual: float
    scales: tuple


def bessel(rs, k: R.MultiplicityParam, lam, x, plan=None, rtol: float = 1e-4, max_scale: int = 64) -> BesselEstimate:
    """Rational limit J_{k,lam}(x) = lim F_{k, m lam}(x / m) for lam in R_{>=0} P+.

    F is evaluated at the spectral points m lam + rho_k (m lam on the lattice),
    m doubled until two successive extrapolated values agree to ``rtol``, and
    the ladder is extrapolated in 1/m.
    """
    lam = tuple(Fraction(c) for c in lam)
    xs = tuple(float(c) for c in x)
    if all(c == 0 for c in lam) or all(c == 0 for c in xs):
        return BesselEstimate(1.0, 0.0, ())
    base = 1
    while True:
        try:
            E.to_coords(rs, R.vscale(base, lam))
            break
        except R.NotInLattice:
            base += 1
            if base > 10**6:
                raise ValueError("lambda is not a rational multiple of a lattice point")
    hs, vals, diag = [], [], []
    m = base
    while m <= max_scale * base:
        mu = E.to_coords(rs, R.vscale(m, lam))
        if any(c < 0 for c in mu):
            raise ValueError("lambda must be dominant")
        poly = None if k.is_zero() else ho_poly_laplacian(rs, k, mu)
        val = f_spectral(rs, k, mu, tuple(c / m for c in xs), poly=poly)
        hs.append(1.0 / m)
        vals.append(val)
        if len(vals) >= 2:
            diag = neville_at_zero(hs, vals)
            if abs(diag[-1] - diag[-2]) <= rtol * abs(diag[-1]) and len(vals) >= 3:
                return BesselEstimate(diag[-1], abs(diag[-1] - diag[-2]) / abs(diag[-1]), tuple(round(1 / h) for h in hs))
        m *= 2
    raise NotConverged("rational limit did not converge")


def asymptotic_envelope(rs, k: R.MultiplicityParam, lam, y, t) -> float:
    """e^{t <lam - rho_k, y>} prod_{a in Phi+_lam} (1 + t <a, y>)."""
    lam = tuple(Fraction(c) if not isinstance(c, float) else c for c in lam)
    expo = t * float(R.dot(R.vsub(lam, R.rho_k(rs, k)), y))
    prod = 1.0
    for a in R.phi_plus_lambda(rs, lam):
        prod *= 1.0 + t * float(R.dot(a, y))
    return math.exp(expo) * prod


__all__ = [
    "BesselEstimate",
    "GammaPole",
    "HOPoly",
    "NotConverged",
    "asymptotic_envelope",
    "bessel",
    "c_function",
    "f_spectral",
    "ho_poly",
    "ho_poly_cherednik_oracle",
    "ho_poly_laplacian",
    "normalization_residual",
    "orbit_mean_exponential",
    "tilde_c",
]
