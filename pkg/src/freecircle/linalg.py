"""Exact rational linear algebra for tiny dense systems.

All coefficients are ``fractions.Fraction``; there is no floating point
anywhere.  Matrices in this project are small (bidegree dimensions rarely
exceed 3, never 8), so a plain dense Gaussian elimination with first-nonzero
pivoting is both fast enough and, crucially, deterministic: repeated runs
produce identical bases, which the golden-output tests rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vec = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(entries: Iterable) -> Vec:
    return tuple(Fraction(e) for e in entries)


def zero_vec(dim: int) -> Vec:
    return (ZERO,) * dim


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Fraction, u: Vec) -> Vec:
    if c == 1:
        return u
    return tuple(c * a for a in u)


def is_zero_vec(u: Vec) -> bool:
    return all(a == 0 for a in u)


class Span:
    """Row space with coefficient tracking.

    Keeps an echelon form of the vectors added so far together with the
    expression of each echelon row in terms of the original vectors, so
    membership queries also return the coefficients of one (deterministic)
    representation.  Pivot = first nonzero coordinate.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[tuple[int, Vec, dict[int, Fraction]]] = []  # (pivot, row, combo)
        self.count = 0  # number of vectors offered via add()

    def _reduce(self, v: Vec) -> tuple[Vec, dict[int, Fraction]]:
        combo: dict[int, Fraction] = {}
        for pivot, row, rcombo in self.rows:
            c = v[pivot]
            if c != 0:
                v = tuple(a - c * b for a, b in zip(v, row))
                for k, x in rcombo.items():
                    combo[k] = combo.get(k, ZERO) - c * x
        return v, combo

    def coords(self, v: Vec) -> Optional[dict[int, Fraction]]:
        """Coefficients expressing v over the added vectors, or None."""
        residual, combo = self._reduce(v)
        if not is_zero_vec(residual):
            return None
        return {k: -c for k, c in combo.items() if c != 0}

    def residual(self, v: Vec) -> Vec:
        """v reduced against the span (zero iff contained)."""
        residual, _ = self._reduce(v)
        return residual

    def contains(self, v: Vec) -> bool:
        residual, _ = self._reduce(v)
        return is_zero_vec(residual)

    def add(self, v: Vec) -> bool:
        """Add a vector; returns True if it enlarged the span."""
        idx = self.count
        self.count += 1
        residual, combo = self._reduce(v)
        for pivot, a in enumerate(residual):
            if a != 0:
                row = vec_scale(ONE / a, residual)
                combo = {k: c / a for k, c in combo.items()}
                combo[idx] = ONE / a
                self.rows.append((pivot, row, combo))
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)


def rref(rows: Sequence[Vec]) -> list[Vec]:
    """Reduced row echelon form (first-nonzero pivoting)."""
    work = [tuple(r) for r in rows]
    out: list[Vec] = []
    pivots: list[int] = []
    for r in work:
        for pivot, row in zip(pivots, out):
            c = r[pivot]
            if c != 0:
                r = tuple(a - c * b for a, b in zip(r, row))
        for j, a in enumerate(r):
            if a != 0:
                r = vec_scale(ONE / a, r)
                # back-substitute into existing rows
                out = [tuple(b - row[j] * c for b, c in zip(row, r)) for row in out]
                out.append(r)
                pivots.append(j)
                break
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order]


def matrix_rank(rows: Sequence[Vec]) -> int:
    return len(rref(rows))


def kernel_of_rows(rows: Sequence[Vec], ncols: int) -> list[Vec]:
    """Basis of {v : A v = 0} where ``rows`` are the rows of A.

    Free columns in ascending order give one basis vector each, with a 1 at
    the free column; deterministic.
    """
    red = rref(rows)
    pivots = []
    for row in red:
        for j, a in enumerate(row):
            if a != 0:
                pivots.append(j)
                break
    pivot_set = set(pivots)
    basis: list[Vec] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for row, pj in zip(red, pivots):
            v[pj] = -row[free]
        basis.append(tuple(v))
    return basis


def solve_columns(cols: Sequence[Vec], target: Vec) -> Optional[list[Fraction]]:
    """Solve sum_i x_i cols[i] = target exactly; None if inconsistent."""
    span = Span(len(target))
    for c in cols:
        span.add(c)
    coords = span.coords(target)
    if coords is None:
        return None
    return [coords.get(i, ZERO) for i in range(len(cols))]


@dataclass
class Matrix:
    """Sparse exact matrix: entries maps (row, col) -> nonzero Fraction."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"entry ({i},{j}) out of bounds")
            v = Fraction(v)
            if v != 0:
                clean[(i, j)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {}
        for i, r in enumerate(rows):
            assert len(r) == ncols
            for j, v in enumerate(r):
                if v != 0:
                    entries[(i, j)] = Fraction(v)
        return cls(nrows, ncols, entries)

    def row_vectors(self) -> list[Vec]:
        out = []
        for i in range(self.rows):
            out.append(tuple(self.entries.get((i, j), ZERO) for j in range(self.cols)))
        return out

    def apply(self, v: Vec) -> Vec:
        assert len(v) == self.cols
        out = [ZERO] * self.rows
        for (i, j), c in self.entries.items():
            out[i] += c * v[j]
        return tuple(out)


def rank(m: Matrix) -> int:
    return matrix_rank(m.row_vectors())


def kernel_basis(m: Matrix) -> list[Vec]:
    """Basis of the exact null space; len == cols - rank."""
    return kernel_of_rows(m.row_vectors(), m.cols)


class QuotientProjector:
    """Coordinates in ambient/subspace, i.e. the quotient map.

    coords(v) returns the coefficients of v over the chosen quotient
    representatives; the subspace component is discarded, so the composite
    with the inclusion of the subspace is zero.
    """

    def __init__(self, dim: int, subspace: Sequence[Vec], reps: Sequence[Vec]):
        self.dim = dim
        self.reps = list(reps)
        self._span = Span(dim)
        self._n_sub = 0
        for v in subspace:
            if self._span.add(v):
                self._n_sub += 1
        # count of independent subspace rows used to split coordinates
        self._sub_rows = self._span.rank
        self._sub_count = self._span.count
        for r in reps:
            added = self._span.add(r)
            assert added, "quotient representative inside subspace"

    def coords(self, v: Vec) -> Vec:
        c = self._span.coords(v)
        if c is None:
            raise ValueError("vector outside ambient span(subspace + reps)")
        return tuple(c.get(self._sub_count + i, ZERO) for i in range(len(self.reps)))


def quotient_basis(
    ambient_dim: int, subspace: Sequence[Vec]
) -> tuple[list[Vec], QuotientProjector]:
    """Complete ``subspace`` to a basis of Q^ambient_dim.

    Dependent subspace input is tolerated (reduced internally).  The
    representatives are the first standard unit vectors independent from the
    subspace, in ascending coordinate order.
    """
    span = Span(ambient_dim)
    reduced = []
    for v in subspace:
        assert len(v) == ambient_dim
        if span.add(v):
            reduced.append(v)
    reps = []
    for i in range(ambient_dim):
        e = tuple(ONE if j == i else ZERO for j in range(ambient_dim))
        if span.add(e):
            reps.append(e)
    return reps, QuotientProjector(ambient_dim, reduced, reps)
