"""Normalized Schur polynomials, tableaux and normalized characters."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from . import orbital as O
from . import rootsys as R

ENUM_MAX_SIZE = 12
ENUM_MAX_VARS = 6


@dataclass(frozen=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise ValueError("partition parts must be nonnegative")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts {parts} are not weakly decreasing")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def padded(self, n: int) -> tuple:
        if self.length > n:
            raise ValueError(f"{self.parts} has more than {n} rows")
        return self.parts + (0,) * (n - self.length)

    def __iter__(self):
        return iter(self.parts)


def as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(tuple(lam))


def partitions(d: int, max_len: int | None = None):
    """All partitions of d (descending lexicographic), optionally bounded in length."""
    out = []

    def rec(rem, cap, acc):
        if rem == 0:
            out.append(Partition(tuple(acc)))
            return
        if max_len is not None and len(acc) == max_len:
            return
        for p in range(min(rem, cap), 0, -1):
            rec(rem - p, p, acc + [p])

    rec(d, d, [])
    return out


@dataclass(frozen=True)
class Tableau:
    shape: Partition
    rows: tuple  # rows[i][j] = entry in row i, column j

    def __post_init__(self):
        if tuple(len(r) for r in self.rows) != self.shape.parts:
            raise ValueError("row lengths do not match the shape")
        for r in self.rows:
            if any(a > b for a, b in zip(r, r[1:])):
                raise ValueError("rows must weakly increase")
        for upper, lower in zip(self.rows, self.rows[1:]):
            if any(a >= b for a, b in zip(upper, lower)):
                raise ValueError("columns must strictly increase")

    def reading_word(self):
        return tuple(v for r in self.rows for v in r)

    def content(self, n: int) -> tuple:
        c = [0] * n
        for v in self.reading_word():
            c[v - 1] += 1
        return tuple(c)


def enumerate_ssyt(lam, n: int) -> list:
    """All semistandard tableaux of shape lam with entries in 1..n, ordered by reading word."""
    lam = as_partition(lam)
    if lam.length > n:
        return []
    cells = [(i, j) for i, p in enumerate(lam.parts) for j in range(p)]
    grid = {}
    out = []

    def rec(idx):
        if idx == len(cells):
            out.append(Tableau(lam, tuple(tuple(grid[(i, j)] for j in range(p)) for i, p in enumerate(lam.parts))))
            return
        i, j = cells[idx]
        lo = 1
        if j > 0:
            lo = max(lo, grid[(i, j - 1)])
        if i > 0:
            lo = max(lo, grid[(i - 1, j)] + 1)
        # leave room for the rows below in this column
        for v in range(lo, n + 1 - (_col_height(lam, j) - 1 - i)):
            grid[(i, j)] = v
            rec(idx + 1)
        grid.pop((i, j), None)

    rec(0)
    return out


def _col_height(lam, j):
    return sum(1 for p in lam.parts if p > j)


@lru_cache(maxsize=None)
def _content_counts(parts: tuple, n: int):
    return tuple(sorted(Counter(t.content(n) for t in enumerate_ssyt(Partition(parts), n)).items()))


def ssyt_count(lam, n: int) -> int:
    """|SSYT(lam, n)| by the hook-content formula."""
    lam = as_partition(lam)
    if lam.length > n:
        return 0
    num, den = 1, 1
    conj = [_col_height(lam, j) for j in range(lam.parts[0])] if lam.parts else []
    for i, p in enumerate(lam.parts):
        for j in range(p):
            num *= n + j - i
            den *= (p - j - 1) + (conj[j] - i - 1) + 1
    return num // den


def _is_exact(x):
    return all(isinstance(c, Rational) for c in x)


def schur_enumerated(lam, x):
    """Normalized Schur polynomial by summing tableau weights (exact for rational x)."""
    lam = as_partition(lam)
    n = len(x)
    if lam.length > n:
        raise ValueError(f"{lam.parts} has more rows than variables ({n})")
    counts = _content_counts(lam.parts, n)
    total = sum(c for _, c in counts)
    if _is_exact(x):
        xs = [Fraction(c) for c in x]
        s = sum(c * math.prod(xi**e for xi, e in zip(xs, w)) for w, c in counts)
        return Fraction(s, total)
    xs = [float(c) for c in x]
    return math.fsum(c * math.prod(xi**e for xi, e in zip(xs, w)) for w, c in counts) / total


def schur_character_path(lam, x) -> float:
    """Normalized Schur polynomial through the Weyl character of U(n) (x >= 0)."""
    lam = as_partition(lam)
    n = len(x)
    xs = [float(c) for c in x]
    if any(c < 0 for c in xs):
        raise ValueError("x must be nonnegative")
    nz = [c for c in xs if c > 0]
    if lam.length > len(nz):
        return 0.0
    if lam.size == 0:
        return 1.0
    m = len(nz)
    if m == 1:
        return nz[0] ** lam.size / ssyt_count(lam, n)
    rs = R.build(("A", m - 1))
    val = char_normalized(rs, lam.padded(m), [math.log(c) for c in nz])
    return val * ssyt_count(lam, m) / ssyt_count(lam, n)


def schur_normalized(lam, x):
    """(1/|SSYT(lam, N)|) sum_T x^T, N = len(x)."""
    lam = as_partition(lam)
    n = len(x)
    if lam.length > n:
        raise ValueError(f"{lam.parts} has more rows than variables ({n})")
    if any(c < 0 for c in x):
        raise ValueError("x must be nonnegative")
    if lam.size <= ENUM_MAX_SIZE and n <= ENUM_MAX_VARS:
        return schur_enumerated(lam, x)
    return schur_character_path(lam, x)


def char_normalized(rs, lam, x, cfg: O.OrbitalEvalConfig = O.DEFAULT_CONFIG) -> float:
    """chi_lam(e^x) / dim V_lam for dominant integral lam (ambient coordinates).

    Uses chi_lam / dim = L_{lam+rho}(x) / L_rho(x), which absorbs the
    dimension factor Delta(lam + rho) / Delta(rho).
    """
    lam = tuple(Fraction(c) for c in lam)
    if len(lam) != rs.ambient_dim:
        raise ValueError(f"expected a vector of length {rs.ambient_dim}")
    R.weight_lattice_coords(rs, lam)
    if not R.is_dominant(rs, lam):
        raise ValueError("lam must be dominant")
    if all(float(c) == 0 for c in x):
        return 1.0
    shifted = R.vadd(lam, R.rho(rs))
    return O.hc_eval(rs, shifted, x, cfg) / O.hc_eval(rs, R.rho(rs), x, cfg)


def weyl_dimension(rs, lam) -> Fraction:
    return Fraction(R.discriminant(rs, R.vadd(lam, R.rho(rs)))) / R.discriminant(rs, R.rho(rs))


# --------------------------------------------------------------------------
# majorization of partitions and the Schur-inequality verdict


def partition_majorizes(lam, mu) -> bool:
    """Partial sums of lam dominate those of mu and the sizes agree."""
    lam, mu = as_partition(lam), as_partition(mu)
    if lam.size != mu.size:
        return False
    n = max(lam.length, mu.length)
    a, b = lam.padded(n), mu.padded(n)
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa < sb:
            return False
    return True


def default_grid(n: int, values=(Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(3))):
    """Rational points of [0, 3]^n with sorted coordinates (S is symmetric)."""
    out = []

    def rec(acc, start):
        if len(acc) == n:
            out.append(tuple(acc))
            return
        for i in range(start, len(values)):
            rec(acc + [values[i]], i)

    rec([], 0)
    return out


def separating_ray(lam, mu, n: int, bases=(2, 4, 16, 256)):
    """Points along a separating direction, or [] when lam majorizes mu.

    If the r-th partial sum of mu exceeds that of lam, the indicator y of the
    first r coordinates separates: <mu, y> > max_w <w lam, y>. The ray is
    x = (T, ..., T, 1, ..., 1) with T = e^t, kept exact.
    """
    lam, mu = as_partition(lam), as_partition(mu)
    a, b = lam.padded(n), mu.padded(n)
    if lam.size != mu.size:
        raise ValueError("partitions must have the same size")
    sa = sb = 0
    for r in range(n):
        sa += a[r]
        sb += b[r]
        if sb > sa:
            return [tuple(Fraction(T) if i <= r else Fraction(1) for i in range(n)) for T in bases]
    return []


@dataclass(frozen=True)
class CGSSVerdict:
    majorizes: bool
    inequality_holds: bool
    worst_point: tuple | None
    worst_margin: object
    relative_margin: float

    @property
    def consistent(self) -> bool:
        return self.majorizes == self.inequality_holds


def cgss_verdict(lam, mu, n: int, grid=None, tol: float = 1e-10) -> CGSSVerdict:
    """Compare partial-sum majorization with S_lam >= S_mu on a grid plus the separating ray."""
    lam, mu = as_partition(lam), as_partition(mu)
    if lam.size != mu.size:
        raise ValueError("partitions must have the same size")
    if max(lam.length, mu.length) > n:
        raise ValueError("too many rows for n variables")
    maj = partition_majorizes(lam, mu)
    points = list(grid if grid is not None else default_grid(n))
    if not maj:
        points += separating_ray(lam, mu, n)
    worst, worst_pt, rel = None, None, 0.0
    for x in points:
        s_lam, s_mu = schur_normalized(lam, x), schur_normalized(mu, x)
        margin = s_lam - s_mu
        if worst is None or margin < worst:
            worst, worst_pt = margin, tuple(x)
            rel = float(Fraction(margin) / max(1, abs(s_lam), abs(s_mu))) if isinstance(margin, Fraction) else margin / max(1.0, abs(s_lam), abs(s_mu))
    holds = worst >= -tol
    return CGSSVerdict(maj, holds, None if lam == mu else worst_pt, worst, rel)


__all__ = [
    "CGSSVerdict",
    "Partition",
    "Tableau",
    "as_partition",
    "cgss_verdict",
    "char_normalized",
    "default_grid",
    "enumerate_ssyt",
    "partition_majorizes",
    "partitions",
    "schur_character_path",
    "schur_enumerated",
    "schur_normalized",
    "separating_ray",
    "ssyt_count",
    "weyl_dimension",
]
