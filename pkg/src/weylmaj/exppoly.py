"""Exponential polynomials on the weight lattice.

An :class:`ExpPoly` is a finitely supported map from integer
fundamental-weight coordinates to coefficients. Coefficients are kept exact
(``Fraction``) whenever the inputs are exact.

Inner products ``(f, g)_k`` are computed from the Fourier coefficients of the
weight ``|delta_k|^2`` on the torus, ``(f, g)_k = sum_{u,v} f_u g_v w(u - v)``,
with three interchangeable sources for ``w``:

* ``exact``: coefficients of the expanded product (integer k only),
* ``fourier``: an exact recurrence valid for every real k >= 0, returning the
  weight normalized so that ``(1, 1)_k = 1``,
* ``quadrature``: trapezoid rule on the torus with grid doubling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rootsys as R


# --------------------------------------------------------------------------
# lattice data cached per root system


@dataclass(frozen=True)
class LatticeData:
    rank: int
    cartan: tuple  # cartan[i] = lattice simple root i in omega-coordinates
    pos_roots: tuple  # positive roots in omega-coordinates
    coroot_fn: tuple  # coroot_fn[a][j] = <omega_j, alpha_a^vee>
    gram: tuple  # <omega_i, omega_j>
    simple_coeff_of_omega: tuple  # omega_j in the (indivisible) simple-root basis


def lattice_data(rs: R.RootSystem) -> LatticeData:
    if "lattice" in rs.cache:
        return rs.cache["lattice"]
    r = rs.rank
    cartan = tuple(R.weight_lattice_coords(rs, b) for b in rs.lattice_simple_roots)
    pos = tuple(R.weight_lattice_coords(rs, a) for a in rs.positive_roots)
    cor = tuple(
        tuple(R.dot(w, R.coroot(a)) for w in rs.fundamental_weights) for a in rs.positive_roots
    )
    gram = tuple(tuple(R.dot(u, v) for v in rs.fundamental_weights) for u in rs.fundamental_weights)
    sc = tuple(R.simple_root_coefficients(rs, w) for w in rs.fundamental_weights)
    data = LatticeData(r, cartan, pos, cor, gram, sc)
    rs.cache["lattice"] = data
    return data


def to_coords(rs, v) -> tuple:
    """Ambient vector -> omega-coordinates (raises NotInLattice)."""
    return R.weight_lattice_coords(rs, v)


def to_ambient(rs, nu) -> tuple:
    return R.lattice_to_ambient(rs, nu)


def pair(rs, u, v):
    """<u, v> for two lattice points given in omega-coordinates."""
    g = lattice_data(rs).gram
    return sum(u[i] * g[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j])


def height(rs, nu):
    """Sum of simple-root coefficients."""
    sc = lattice_data(rs).simple_coeff_of_omega
    return sum(n * sum(sc[j]) for j, n in enumerate(nu) if n)


def reflect_simple(rs, i, nu):
    cart = lattice_data(rs).cartan[i]
    n = nu[i]
    if n == 0:
        return tuple(nu)
    return tuple(a - n * c for a, c in zip(nu, cart))


def dominant_coords(rs, nu):
    nu = tuple(nu)
    while True:
        for i in range(len(nu)):
            if nu[i] < 0:
                nu = reflect_simple(rs, i, nu)
                break
        else:
            return nu


def orbit_coords(rs, nu) -> tuple:
    """W-orbit of a lattice point, breadth-first."""
    key = ("orbit", tuple(nu))
    hit = rs.cache.get(key)
    if hit is not None:
        return hit
    start = tuple(nu)
    seen = {start}
    order = [start]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for j in range(len(v)):
            w = reflect_simple(rs, j, v)
            if w not in seen:
                seen.add(w)
                order.append(w)
    out = tuple(order)
    rs.cache[key] = out
    return out


# --------------------------------------------------------------------------
# ExpPoly


class ExpPoly:
    """Finite sum ``sum_nu c_nu e^nu`` with nu in omega-coordinates."""

    __slots__ = ("terms", "rank")

    def __init__(self, terms=None, rank: int | None = None):
        clean = {}
        for nu, c in (terms or {}).items():
            if c != 0:
                clean[tuple(nu)] = c
        if rank is None:
            rank = len(next(iter(clean))) if clean else 0
        self.terms = clean
        self.rank = rank

    @classmethod
    def monomial(cls, nu, c=1):
        return cls({tuple(nu): Fraction(c) if isinstance(c, int) else c}, len(nu))

    @classmethod
    def constant(cls, rank, c=1):
        return cls.monomial((0,) * rank, c)

    def coeff(self, nu):
        return self.terms.get(tuple(nu), 0)

    def support(self):
        return sorted(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, ExpPoly):
            return self.terms == other.terms
        return NotImplemented

    def __add__(self, other):
        out = dict(self.terms)
        for nu, c in other.terms.items():
            out[nu] = out.get(nu, 0) + c
        return ExpPoly(out, self.rank or other.rank)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return ExpPoly({nu: c * v for nu, v in self.terms.items()}, self.rank)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __repr__(self):
        body = " + ".join(f"{c}*e^{nu}" for nu, c in sorted(self.terms.items(), reverse=True))
        return f"ExpPoly({body or '0'})"


def multiply(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    out = {}
    for u, a in f.terms.items():
        for v, b in g.terms.items():
            w = tuple(x + y for x, y in zip(u, v))
            out[w] = out.get(w, 0) + a * b
    return ExpPoly(out, f.rank or g.rank)


def bar(f: ExpPoly) -> ExpPoly:
    return ExpPoly({tuple(-x for x in nu): c for nu, c in f.terms.items()}, f.rank)


def constant_term(f: ExpPoly):
    return f.coeff((0,) * f.rank)


def _pos_root_factor(rs, idx):
    """2 - e^alpha - e^-alpha for the positive root with index ``idx``."""
    a = lattice_data(rs).pos_roots[idx]
    zero = (0,) * rs.rank
    return ExpPoly({zero: Fraction(2), a: Fraction(-1), tuple(-x for x in a): Fraction(-1)}, rs.rank)


def delta_k_squared(rs, k: R.MultiplicityParam) -> ExpPoly:
    """``prod_{alpha>0} (2 - e^alpha - e^-alpha)^{k_alpha}`` for integer k."""
    if not k.is_integral():
        raise ValueError("delta_k_squared needs integer multiplicities")
    key = ("delta2", k.values)
    if key in rs.cache:
        return rs.cache[key]
    out = ExpPoly.constant(rs.rank)
    for idx in range(len(rs.positive_roots)):
        kk = int(R.k_of_root(rs, k, idx))
        if kk:
            fac = _pos_root_factor(rs, idx)
            for _ in range(kk):
                out = multiply(out, fac)
    rs.cache[key] = out
    return out


def monomial_symmetric(rs, lam) -> ExpPoly:
    """M_lambda: every point of the orbit W.lambda with coefficient 1."""
    lam = tuple(lam)
    if any(x < 0 for x in lam):
        raise ValueError(f"{lam} is not dominant")
    return ExpPoly({nu: Fraction(1) for nu in orbit_coords(rs, lam)}, rs.rank)


def symmetrize(rs, f: ExpPoly) -> ExpPoly:
    """W-average ``(1/|W|) sum_w f o w``."""
    out = {}
    for nu, c in f.terms.items():
        orb = orbit_coords(rs, nu)
        share = c / len(orb) if not isinstance(c, int) else Fraction(c, len(orb))
        for v in orb:
            out[v] = out.get(v, 0) + share
    return ExpPoly(out, f.rank)


def low_set(rs, lam) -> list:
    """Dominant mu with lambda - mu a nonnegative integer combination of simple roots.

    Sorted by decreasing height, ties broken lexicographically (descending).
    """
    lam = tuple(lam)
    if any(x < 0 for x in lam):
        raise ValueError(f"{lam} is not dominant")
    key = ("low", lam)
    if key in rs.cache:
        return rs.cache[key]
    simple = [R.weight_lattice_coords(rs, a) for a in rs.simple_roots]
    # breadth-first search downward through the cone below lambda; every point
    # of the hull of W.lambda below lambda is reachable by single simple-root
    # steps that stay inside that hull
    lam_amb = to_ambient(rs, lam)
    lam_norm = R.dot(lam_amb, lam_amb)
    seen = {lam}
    queue = [lam]
    i = 0
    while i < len(queue):
        v = queue[i]
        i += 1
        for a in simple:
            w = tuple(x - y for x, y in zip(v, a))
            if w in seen:
                continue
            wd = dominant_coords(rs, w)
            amb = to_ambient(rs, wd)
            if R.dot(amb, amb) > lam_norm:
                continue
            diff = tuple(x - y for x, y in zip(lam, wd))
            c = R.simple_root_coefficients(rs, to_ambient(rs, diff))
            if any(x < 0 for x in c):
                continue
            seen.add(w)
            queue.append(w)
    out = sorted({v for v in seen if all(x >= 0 for x in v)}, key=lambda v: (-height(rs, v), tuple(-x for x in v)))
    rs.cache[key] = out
    return out


# --------------------------------------------------------------------------
# Cherednik operators


def _as_number(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    return c


def cherednik_apply(rs, k: R.MultiplicityParam, y, f: ExpPoly) -> ExpPoly:
    """D_{k,y} f for f in R[P].

    D_{k,y} = d_y + sum_{alpha>0} k_alpha <alpha,y> (1 - s_alpha)/(1 - e^-alpha) - <y, rho_k>.
    """
    data = lattice_data(rs)
    y = tuple(_as_number(c) for c in y)
    if len(y) != rs.ambient_dim:
        raise ValueError(f"y must have length {rs.ambient_dim}")
    y_omega = [R.dot(y, w) for w in rs.fundamental_weights]
    shift = R.dot(y, R.rho_k(rs, k))
    weights = []
    for idx, a in enumerate(rs.positive_roots):
        kk = _as_number(R.k_of_root(rs, k, idx))
        c = kk * R.dot(a, y)
        if c != 0:
            weights.append((c, data.pos_roots[idx], data.coroot_fn[idx]))
    out = {}

    def add(nu, c):
        out[nu] = out.get(nu, 0) + c

    for nu, c in f.terms.items():
        add(nu, c * (sum(n * w for n, w in zip(nu, y_omega)) - shift))
        for kc, a, cor in weights:
            n = Fraction(sum(x * q for x, q in zip(nu, cor)))
            if n.denominator != 1:
                raise R.NotInLattice(f"{nu} pairs non-integrally with a coroot")
            n = int(n)
            cc = c * kc
            if n >= 1:
                for j in range(n):
                    add(tuple(x - j * t for x, t in zip(nu, a)), cc)
            elif n <= -1:
                for j in range(1, -n + 1):
                    add(tuple(x + j * t for x, t in zip(nu, a)), -cc)
    return ExpPoly(out, rs.rank)


# --------------------------------------------------------------------------
# evaluation


def evaluate(rs, f: ExpPoly, x):
    """sum_nu f_nu e^{<nu, x>} for real or complex x (compensated summation)."""
    if not f.terms:
        return 0.0
    xw = [complex(R.dot(w, x)) if _is_complex(x) else float(R.dot(w, x)) for w in rs.fundamental_weights]
    exps = []
    coefs = []
    for nu, c in f.terms.items():
        exps.append(sum(n * t for n, t in zip(nu, xw)))
        coefs.append(float(c))
    if isinstance(exps[0], complex):
        vals = [c * complex(math.cos(e.imag), math.sin(e.imag)) * math.exp(e.real) for c, e in zip(coefs, exps)]
        return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
    emax = max(exps)
    s = math.fsum(c * math.exp(e - emax) for c, e in zip(coefs, exps))
    return s * math.exp(emax)


def _is_complex(x):
    return any(isinstance(c, complex) for c in x)


# --------------------------------------------------------------------------
# inner products


@dataclass(frozen=True)
class InnerProductPlan:
    """How to compute ``(f, g)_k``.

    ``mode`` is ``exact`` (integer k), ``fourier`` (any k, normalized so that
    ``(1, 1)_k = 1``) or ``quadrature`` (any k, torus trapezoid rule).
    """

    k: R.MultiplicityParam
    mode: str = "auto"
    quadrature_grid: int = 64
    max_doublings: int = 4
    rtol: float = 1e-9
    max_points: int = 2**22

    def __post_init__(self):
        if self.mode not in ("auto", "exact", "fourier", "quadrature"):
            raise ValueError(f"unknown inner product mode {self.mode!r}")
        if self.mode == "exact" and not self.k.is_integral():
            raise ValueError("exact mode requires integer multiplicities")

    @property
    def resolved_mode(self):
        if self.mode != "auto":
            return self.mode
        return "exact" if self.k.is_integral() else "fourier"


class QuadratureNotConverged(ArithmeticError):
    pass


class WeightCoefficients:
    """Fourier coefficients ``w(nu)`` of the weight ``|delta_k|^2`` (lazy, memoized)."""

    def __init__(self, rs, plan: InnerProductPlan):
        self.rs = rs
        self.plan = plan
        self.mode = plan.resolved_mode
        self.k = plan.k
        self._memo = {}
        data = lattice_data(rs)
        self._roots = []
        for idx in range(len(rs.positive_roots)):
            kk = R.k_of_root(rs, self.k, idx)
            if kk != 0:
                self._roots.append((_as_number(kk), data.pos_roots[idx], data.coroot_fn[idx]))
        if self.mode == "exact":
            self._delta = delta_k_squared(rs, R.MultiplicityParam(tuple(int(v) for v in self.k.values)))
        self._quad_grid = None

    def __call__(self, nu):
        nu = dominant_coords(self.rs, nu)
        if nu in self._memo:
            return self._memo[nu]
        if self.mode == "exact":
            val = self._delta.coeff(nu)
        elif self.mode == "fourier":
            val = self._fourier(nu)
        else:
            val = self._quadrature(nu)
        self._memo[nu] = val
        return val

    def _fourier(self, nu):
        """Recurrence from the symmetry of the Heckman-Opdam Laplacian.

        For dominant nu != 0:
          w(nu) (<nu,nu> + sum k_a <nu,a>) = -sum_{a: n_a >= 1} k_a <nu,a> sum_{j=1}^{n_a - 1} w(nu - j a)
        where n_a = <nu, a^vee>; w vanishes off the root lattice.
        """
        rs = self.rs
        if all(x == 0 for x in nu):
            return Fraction(1)
        if not _in_root_lattice(rs, nu):
            return Fraction(0)
        lhs = pair(rs, nu, nu)
        rhs = 0
        for kk, a, cor in self._roots:
            n = sum(x * q for x, q in zip(nu, cor))
            if n < 1:
                continue
            na = kk * pair(rs, nu, a)
            lhs += na
            n = int(n)
            acc = 0
            for j in range(1, n):
                acc += self(tuple(x - j * t for x, t in zip(nu, a)))
            rhs -= na * acc
        return rhs / lhs

    def _quadrature(self, nu):
        """Trapezoid rule on the torus; doubles the grid until w(nu) is stable."""
        m = self.plan.quadrature_grid
        prev = None
        for _ in range(self.plan.max_doublings + 1):
            if self._quad_grid is None or self._quad_grid[0] < m:
                self._quad_grid = (m, self._grid_values(m))
            grid_m, table = self._quad_grid
            val = float(table[tuple((-x) % grid_m for x in nu)].real)
            scale = abs(float(table[(0,) * self.rs.rank].real))
            if prev is not None and abs(val - prev) <= self.plan.rtol * max(abs(val), scale):
                return val
            prev = val
            m *= 2
        raise QuadratureNotConverged(
            f"torus quadrature did not reach rtol {self.plan.rtol} after {self.plan.max_doublings} doublings"
        )

    def _grid_values(self, m):
        rs = self.rs
        r = rs.rank
        if m**r > self.plan.max_points:
            raise QuadratureNotConverged(f"quadrature grid {m}^{r} exceeds the point budget")
        axes = np.meshgrid(*([np.arange(m) / m] * r), indexing="ij")
        t = np.stack(axes, axis=-1)
        w = np.ones(t.shape[:-1])
        for kk, a, _ in self._roots:
            phase = np.pi * (t @ np.array(a, dtype=float))
            w = w * np.abs(2.0 * np.sin(phase)) ** (2.0 * float(kk))
        return np.fft.fftn(w) / m**r


def _in_root_lattice(rs, nu):
    c = R.simple_root_coefficients(rs, to_ambient(rs, nu))
    return all(x.denominator == 1 for x in c)


def inner_product_k(rs, f: ExpPoly, g: ExpPoly, plan: InnerProductPlan, weights: WeightCoefficients | None = None):
    """``(f, g)_k = constant term of f * bar(g) * |delta_k|^2`` (real coefficients)."""
    w = weights or WeightCoefficients(rs, plan)
    total = 0
    for u, a in f.terms.items():
        for v, b in g.terms.items():
            total += a * b * w(tuple(x - y for x, y in zip(u, v)))
    return total


__all__ = [
    "ExpPoly",
    "InnerProductPlan",
    "QuadratureNotConverged",
    "WeightCoefficients",
    "bar",
    "cherednik_apply",
    "constant_term",
    "delta_k_squared",
    "evaluate",
    "inner_product_k",
    "low_set",
    "monomial_symmetric",
    "multiply",
    "symmetrize",
]
