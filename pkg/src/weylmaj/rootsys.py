"""Root systems, Weyl groups and weight-lattice combinatorics.

Everything here is exact: coordinates are ``fractions.Fraction`` and the
inner product is the standard dot product on the ambient space, which gives
roots of simply-laced systems squared length 2 and BC_1 the literal orbits
{+-1}, {+-2}.

For the non-reduced family BC_n the weight lattice is taken with respect to
the basis ``e_i - e_{i+1}, 2 e_n`` (the C_n basis), so that every root pairs
integrally with every coroot; dominance and majorization still use the
indivisible simple roots ``e_i - e_{i+1}, e_n``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ._linalg import solve

Vec = tuple  # tuple[Fraction, ...]

DEFAULT_ENUMERATION_BOUND = 2_000_000
_FAMILIES = ("A", "B", "C", "D", "BC", "G", "F", "E")


class NotInLattice(ValueError):
    """Raised when a vector is not an integral weight."""


class EnumerationBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CartanLabel:
    family: str
    rank: int

    def __post_init__(self):
        fam, r = self.family, self.rank
        if fam not in _FAMILIES:
            raise ValueError(f"unknown root system family {fam!r}")
        if not isinstance(r, int) or r < 1:
            raise ValueError(f"rank must be a positive integer, got {r!r}")
        ok = {
            "A": r >= 1,
            "B": r >= 2,
            "C": r >= 2,
            "D": r >= 2,
            "BC": r >= 1,
            "G": r == 2,
            "F": r == 4,
            "E": 6 <= r <= 8,
        }[fam]
        if not ok:
            raise ValueError(f"invalid Cartan label {fam}{r}")

    def __str__(self):
        return f"{self.family}{self.rank}"


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v):
    return tuple(c * a for a in v)


def coroot(alpha):
    return vscale(Fraction(2) / dot(alpha, alpha), alpha)


def reflect(alpha, v):
    """s_alpha(v) = v - <v, alpha^vee> alpha."""
    return vsub(v, vscale(dot(v, coroot(alpha)), alpha))


def _e(n, i, c=1):
    v = [Fraction(0)] * n
    v[i] = Fraction(c)
    return v


def _simple_roots(label: CartanLabel):
    fam, r = label.family, label.rank
    F = Fraction
    if fam == "A":
        n = r + 1
        return n, [tuple(F(int(j == i)) - F(int(j == i + 1)) for j in range(n)) for i in range(r)]
    if fam in ("B", "C", "D", "BC"):
        n = r
        simple = [tuple(F(int(j == i)) - F(int(j == i + 1)) for j in range(n)) for i in range(r - 1)]
        if fam in ("B", "BC"):
            simple.append(tuple(_e(n, n - 1)))
        elif fam == "C":
            simple.append(tuple(_e(n, n - 1, 2)))
        else:
            last = _e(n, n - 2)
            last[n - 1] = F(1)
            simple.append(tuple(last))
        return n, simple
    if fam == "G":
        return 3, [(F(1), F(-1), F(0)), (F(-2), F(1), F(1))]
    if fam == "F":
        h = F(1, 2)
        return 4, [
            (F(0), F(1), F(-1), F(0)),
            (F(0), F(0), F(1), F(-1)),
            (F(0), F(0), F(0), F(1)),
            (h, -h, -h, -h),
        ]
    # E_r inside R^8, Bourbaki numbering
    h = F(1, 2)
    e8 = [
        (h, -h, -h, -h, -h, -h, -h, h),
        (F(1), F(1), F(0), F(0), F(0), F(0), F(0), F(0)),
    ]
    for i in range(6):
        v = [F(0)] * 8
        v[i + 1] = F(1)
        v[i] = F(-1)
        e8.append(tuple(v))
    return 8, e8[:r]


@dataclass(frozen=True, eq=False)
class RootSystem:
    label: CartanLabel
    ambient_dim: int
    simple_roots: tuple
    positive_roots: tuple
    fundamental_weights: tuple
    reduced: bool
    lattice_simple_roots: tuple
    root_orbit: tuple  # orbit index of each positive root
    n_orbits: int
    simple_coefficients: tuple  # positive roots in the simple-root basis
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.label.rank

    @property
    def roots(self):
        return self.positive_roots + tuple(vscale(-1, a) for a in self.positive_roots)

    def inner(self, u, v):
        return dot(u, v)

    def zero(self):
        return tuple(Fraction(0) for _ in range(self.ambient_dim))

    def __repr__(self):
        return f"RootSystem({self.label})"


def _closure(simple, extra=()):
    seen = set()
    order = []
    queue = deque(list(simple) + list(extra))
    while queue:
        v = queue.popleft()
        if v in seen:
            continue
        seen.add(v)
        order.append(v)
        for a in simple:
            w = reflect(a, v)
            if w not in seen:
                queue.append(w)
    return order


def _coefficients(simple, v):
    gram = [[dot(a, b) for b in simple] for a in simple]
    rhs = [dot(a, v) for a in simple]
    return tuple(solve(gram, rhs))


@lru_cache(maxsize=None)
def build(label) -> RootSystem:
    """Standard realization of the root system with the given Cartan label."""
    if not isinstance(label, CartanLabel):
        fam, r = label
        label = CartanLabel(str(fam).upper(), int(r))
    n, simple = _simple_roots(label)
    extra = []
    if label.family == "BC":
        extra = [vscale(2, simple[-1])]
    roots = _closure(simple, extra)
    positive = []
    coeffs = {}
    for v in roots:
        c = _coefficients(simple, v)
        if all(x >= 0 for x in c):
            positive.append(v)
            coeffs[v] = c
    positive.sort(key=lambda v: (sum(coeffs[v]), tuple(-x for x in coeffs[v])))
    positive = tuple(positive)
    lattice_simple = list(simple)
    if label.family == "BC":
        lattice_simple[-1] = vscale(2, simple[-1])
    cartan = [[dot(b, coroot(c)) for c in lattice_simple] for b in lattice_simple]
    r = label.rank
    fund = []
    for i in range(r):
        # omega_i = sum_l m_l beta_l with cartan^T m = e_i
        m = solve([[cartan[l][j] for l in range(r)] for j in range(r)], [Fraction(int(i == j)) for j in range(r)])
        w = tuple(sum(m[l] * lattice_simple[l][t] for l in range(r)) for t in range(n))
        fund.append(w)
    # W-orbits of positive roots
    orbit_id = {}
    classes = []
    for a in positive:
        if a in orbit_id:
            continue
        members = set(_orbit_of(simple, a)) & set(positive)
        classes.append(sorted(members, key=positive.index))
        for v in members:
            orbit_id[v] = None
    classes.sort(key=lambda cl: (dot(cl[0], cl[0]), positive.index(cl[0])))
    orbit_index = {}
    for idx, cl in enumerate(classes):
        for v in cl:
            orbit_index[v] = idx
    reduced = not any(vscale(2, a) in coeffs for a in positive)
    return RootSystem(
        label=label,
        ambient_dim=n,
        simple_roots=tuple(simple),
        positive_roots=positive,
        fundamental_weights=tuple(fund),
        reduced=reduced,
        lattice_simple_roots=tuple(lattice_simple),
        root_orbit=tuple(orbit_index[a] for a in positive),
        n_orbits=len(classes),
        simple_coefficients=tuple(coeffs[a] for a in positive),
    )


@lru_cache(maxsize=None)
def _integer_reflections(simple):
    """Simple reflections as integer matrices, or None if any entry is fractional."""
    n = len(simple[0])
    mats = []
    for a in simple:
        cols = [reflect(a, tuple(_e(n, i))) for i in range(n)]
        rows = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
        if any(x.denominator != 1 for row in rows for x in row):
            return None
        mats.append(tuple(tuple(int(x) for x in row) for row in rows))
    return tuple(mats)


def _orbit_of(simple, v):
    mats = _integer_reflections(tuple(simple))
    if mats is not None:
        return _integer_orbit(mats, v)
    seen = {v}
    queue = deque([v])
    order = [v]
    while queue:
        u = queue.popleft()
        for a in simple:
            w = reflect(a, u)
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def _integer_orbit(mats, v):
    den = math.lcm(*(Fraction(x).denominator for x in v))
    u0 = tuple(int(Fraction(x) * den) for x in v)
    seen = {u0}
    queue = deque([u0])
    order = [u0]
    while queue:
        u = queue.popleft()
        for m in mats:
            w = tuple(sum(r * x for r, x in zip(row, u)) for row in m)
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return [tuple(Fraction(x, den) for x in u) for u in order]


# --------------------------------------------------------------------------
# Weyl group


@dataclass(frozen=True)
class WeylGroupElement:
    matrix: tuple  # rows of Fractions, acts on column vectors
    sign: int
    word: tuple = ()

    def __call__(self, v):
        return tuple(dot(row, v) for row in self.matrix)

    def compose(self, other: "WeylGroupElement") -> "WeylGroupElement":
        """self o other."""
        cols = list(zip(*other.matrix))
        mat = tuple(tuple(dot(row, col) for col in cols) for row in self.matrix)
        return WeylGroupElement(mat, self.sign * other.sign, other.word + self.word)


@dataclass(frozen=True)
class WeylGroup:
    elements: tuple
    order: int


def identity_element(rs: RootSystem) -> WeylGroupElement:
    n = rs.ambient_dim
    return WeylGroupElement(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)), 1, ())


def _right_multiply_simple(w: WeylGroupElement, alpha, i: int) -> WeylGroupElement:
    """w o s_alpha as a rank-one update of w's matrix."""
    c = coroot(alpha)
    wa = tuple(dot(row, alpha) for row in w.matrix)
    mat = tuple(tuple(m - wa_r * cj for m, cj in zip(row, c)) for row, wa_r in zip(w.matrix, wa))
    return WeylGroupElement(mat, -w.sign, w.word + (i,))


def classical_order(label: CartanLabel) -> int:
    fam, r = label.family, label.rank
    if fam == "A":
        return math.factorial(r + 1)
    if fam in ("B", "C", "BC"):
        return 2**r * math.factorial(r)
    if fam == "D":
        return 2 ** (r - 1) * math.factorial(r)
    return {"G": 12, "F": 1152}.get(fam) or {6: 51840, 7: 2903040, 8: 696729600}[r]


def weyl_group(rs: RootSystem, bound: int = DEFAULT_ENUMERATION_BOUND) -> WeylGroup:
    """Enumerate W breadth-first by word length, lexicographic within a length."""
    if "weyl" in rs.cache:
        return rs.cache["weyl"]
    if classical_order(rs.label) > bound:
        raise EnumerationBoundExceeded(
            f"|W({rs.label})| = {classical_order(rs.label)} exceeds the enumeration bound {bound}"
        )
    rho = rho_k(rs, MultiplicityParam.uniform(rs, 1))
    e = identity_element(rs)
    seen = {rho}
    elements = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for w in frontier:
            for i, a in enumerate(rs.simple_roots):
                key = w(reflect(a, rho))
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(_right_multiply_simple(w, a, i))
        elements.extend(nxt)
        frontier = nxt
    group = WeylGroup(tuple(elements), len(elements))
    rs.cache["weyl"] = group
    return group


def dominant_rep(rs: RootSystem, v, tol: float = 0.0):
    """Dominant representative of W.v and an element mapping v to it."""
    v = tuple(v)
    word = []
    while True:
        for i, a in enumerate(rs.simple_roots):
            if dot(a, v) < -tol:
                v = reflect(a, v)
                word.append(i)
                break
        else:
            break
    w = identity_element(rs)
    for i in word:
        # left-multiply: s_i o w
        s = _right_multiply_simple(identity_element(rs), rs.simple_roots[i], i)
        w = s.compose(w)
    return v, w


def weyl_orbit(rs: RootSystem, v) -> tuple:
    """Distinct points of W.v in breadth-first order."""
    return tuple(_orbit_of(rs.simple_roots, tuple(v)))


def is_dominant(rs: RootSystem, v) -> bool:
    return all(dot(a, v) >= 0 for a in rs.simple_roots)


# --------------------------------------------------------------------------
# multiplicities and root data


@dataclass(frozen=True)
class MultiplicityParam:
    """Values of k on the W-orbits of roots, ordered by root length."""

    values: tuple

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ValueError("multiplicities must be nonnegative")

    @classmethod
    def uniform(cls, rs: RootSystem, value) -> "MultiplicityParam":
        return cls(tuple(value for _ in range(rs.n_orbits)))

    @classmethod
    def of(cls, rs: RootSystem, values) -> "MultiplicityParam":
        values = tuple(values)
        if len(values) == 1:
            values = values * rs.n_orbits
        if len(values) != rs.n_orbits:
            raise ValueError(f"{rs.label} has {rs.n_orbits} root orbits, got {len(values)} values")
        return cls(values)

    def __getitem__(self, i):
        return self.values[i]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def is_integral(self) -> bool:
        return all(Fraction(v).denominator == 1 for v in self.values)


def k_of_root(rs: RootSystem, k: MultiplicityParam, index: int):
    return k.values[rs.root_orbit[index]]


def k_half(rs: RootSystem, k: MultiplicityParam, index: int):
    """k_{alpha/2}, zero when alpha/2 is not a root."""
    half = vscale(Fraction(1, 2), rs.positive_roots[index])
    try:
        j = rs.positive_roots.index(half)
    except ValueError:
        return 0
    return k_of_root(rs, k, j)


def rho_k(rs: RootSystem, k: MultiplicityParam):
    total = rs.zero()
    for i, a in enumerate(rs.positive_roots):
        c = k_of_root(rs, k, i)
        if not isinstance(c, float):
            c = Fraction(c)
        total = vadd(total, vscale(c, a))
    return vscale(Fraction(1, 2), total)


def rho(rs: RootSystem):
    """Half-sum of positive roots (k = 1 on every root)."""
    return rho_k(rs, MultiplicityParam.uniform(rs, 1))


def discriminant(rs: RootSystem, v):
    out = 1
    for a in rs.positive_roots:
        out = out * dot(a, v)
    return out


def phi_plus_lambda(rs: RootSystem, lam) -> tuple:
    """Indivisible positive roots orthogonal to ``lam``."""
    pos = set(rs.positive_roots)
    return tuple(
        a for a in rs.positive_roots if vscale(Fraction(1, 2), a) not in pos and dot(a, lam) == 0
    )


def is_spherical_weight(rs: RootSystem, lam) -> bool:
    """<lam, alpha> / <alpha, alpha> in Z_{>=0} for every positive root (taken literally)."""
    for a in rs.positive_roots:
        q = Fraction(dot(lam, a)) / dot(a, a)
        if q < 0 or q.denominator != 1:
            return False
    return True


def weight_lattice_coords(rs: RootSystem, lam) -> tuple:
    """Coordinates of ``lam`` in the fundamental-weight basis.

    The W-fixed component of ``lam`` (type A in R^n) is ignored.
    """
    out = []
    for b in rs.lattice_simple_roots:
        c = Fraction(dot(lam, coroot(b)))
        if c.denominator != 1:
            raise NotInLattice(f"{tuple(str(x) for x in lam)} is not an integral weight of {rs.label}")
        out.append(int(c))
    return tuple(out)


def lattice_to_ambient(rs: RootSystem, coords) -> tuple:
    total = rs.zero()
    for c, w in zip(coords, rs.fundamental_weights):
        if c:
            total = vadd(total, vscale(c, w))
    return total


def project_to_span(rs: RootSystem, v) -> tuple:
    """Orthogonal projection of ``v`` onto span(Phi)."""
    c = _coefficients(list(rs.simple_roots), tuple(v))
    total = rs.zero()
    for ci, a in zip(c, rs.simple_roots):
        total = vadd(total, vscale(ci, a))
    return total


def simple_root_coefficients(rs: RootSystem, v) -> tuple:
    """Coefficients of the span(Phi) component of ``v`` in the simple-root basis."""
    return _coefficients(list(rs.simple_roots), tuple(v))


def parse_label(text: str) -> CartanLabel:
    text = text.strip().upper()
    fam = text.rstrip("0123456789")
    return CartanLabel(fam, int(text[len(fam):]))
