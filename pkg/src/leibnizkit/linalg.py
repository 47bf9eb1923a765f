"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  Matrices are immutable row-major
grids, vectors are plain tuples of fractions.  Subspaces are kept in reduced
row-echelon form so that two subspaces are equal exactly when their stored
bases are equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


class DimensionError(ValueError):
    """Raised when operands have incompatible shapes."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def parse_rational(s: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; the sign must sit on the numerator."""
    s = s.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"malformed rational {s!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {s!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(*entries) -> Vector:
    if len(entries) == 1 and not isinstance(entries[0], (int, Fraction, str)):
        entries = tuple(entries[0])
    return tuple(as_rational(e) for e in entries)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def vadd(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise DimensionError(f"vector lengths {len(u)} and {len(v)} differ")
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise DimensionError(f"vector lengths {len(u)} and {len(v)} differ")
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    c = as_rational(c)
    return tuple(c * a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


class RatMatrix:
    """Immutable dense matrix of fractions."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(as_rational(a) for a in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise DimensionError("ragged rows")
            if ncols is not None and ncols != width:
                raise DimensionError(f"expected {ncols} columns, got {width}")
        else:
            width = ncols or 0
        self._rows = data
        self.nrows = len(data)
        self.ncols = width

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "RatMatrix":
        if not columns:
            return cls([[] for _ in range(nrows or 0)], ncols=0)
        n = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(n)], ncols=len(columns))

    @classmethod
    def from_flat(cls, flat: Sequence, nrows: int, ncols: int) -> "RatMatrix":
        if len(flat) != nrows * ncols:
            raise DimensionError(f"{len(flat)} entries cannot fill {nrows}x{ncols}")
        return cls([flat[i * ncols:(i + 1) * ncols] for i in range(nrows)], ncols=ncols)

    # access -------------------------------------------------------------
    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def entries(self) -> tuple:
        return tuple(a for row in self._rows for a in row)

    def flat(self) -> Vector:
        return self.entries

    def row(self, i: int) -> Vector:
        return self._rows[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list:
        return [self.col(j) for j in range(self.ncols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix([[self._rows[i][j] for j in cols] for i in rows], ncols=len(cols))

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    # arithmetic ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix([vadd(a, b) for a, b in zip(self._rows, other._rows)], ncols=self.ncols)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix([vsub(a, b) for a, b in zip(self._rows, other._rows)], ncols=self.ncols)

    def __neg__(self) -> "RatMatrix":
        return self.scale(-1)

    def scale(self, c) -> "RatMatrix":
        return RatMatrix([vscale(c, r) for r in self._rows], ncols=self.ncols)

    def __rmul__(self, c) -> "RatMatrix":
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return RatMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows],
                ncols=other.ncols,
            )
        return self.apply(other)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise DimensionError(f"vector of length {len(v)} for matrix with {self.ncols} columns")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self._rows)

    def transpose(self) -> "RatMatrix":
        return RatMatrix.from_columns(list(self._rows), nrows=self.ncols) if self.nrows else RatMatrix.zeros(self.ncols, 0)

    @property
    def T(self) -> "RatMatrix":
        return self.transpose()

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shapes {self.shape} and {other.shape} differ")

    # derived quantities -------------------------------------------------
    def rank(self) -> int:
        return len(rref(self)[1])

    def det(self) -> Fraction:
        if self.nrows != self.ncols:
            raise DimensionError("determinant of a non-square matrix")
        m = [list(r) for r in self._rows]
        n = self.nrows
        det = Fraction(1)
        for k in range(n):
            p = next((i for i in range(k, n) if m[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            if p != k:
                m[k], m[p] = m[p], m[k]
                det = -det
            det *= m[k][k]
            for i in range(k + 1, n):
                if m[i][k]:
                    f = m[i][k] / m[k][k]
                    m[i] = [a - f * b for a, b in zip(m[i], m[k])]
        return det

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> "RatMatrix":
        if self.nrows != self.ncols:
            raise DimensionError("inverse of a non-square matrix")
        n = self.nrows
        aug = RatMatrix([list(r) + list(e) for r, e in zip(self._rows, RatMatrix.identity(n).rows)])
        red, piv = rref(aug)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("matrix is singular")
        return RatMatrix([r[n:] for r in red.rows], ncols=n)

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(a) for a in r) for r in self._rows)
        return f"RatMatrix({self.nrows}x{self.ncols}: [{body}])"


def _rref_rows(rows: list, ncols: int) -> tuple:
    """In-place Gauss-Jordan on a list of lists; returns (rows, pivots)."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [a / pv for a in rows[r]]
        prow = rows[r]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    ri = rows[i]
                    for j in nz:
                        ri[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: RatMatrix) -> tuple:
    """Reduced row-echelon form and pivot columns; zero rows are kept at the bottom."""
    rows, pivots = _rref_rows([list(r) for r in m.rows], m.ncols)
    return RatMatrix(rows, ncols=m.ncols), pivots


def _independent_rows(vectors: Iterable[Sequence], ncols: int) -> tuple:
    rows = [list(v) for v in vectors if not is_zero(v)]
    # identical rows are common in assembled systems; dropping them is free
    seen = set()
    uniq = []
    for r in rows:
        key = tuple(r)
        if key not in seen:
            seen.add(key)
            uniq.append(r)
    reduced, pivots = _rref_rows(uniq, ncols)
    return tuple(tuple(r) for r in reduced[: len(pivots)]), pivots


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n with a basis in reduced row-echelon form."""

    ambient_dim: int
    basis: tuple = ()

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vectors = [tuple(as_rational(a) for a in v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        basis, _ = _independent_rows(vectors, ambient_dim)
        return cls(ambient_dim, basis)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list:
        return [next(j for j, a in enumerate(b) if a != 0) for b in self.basis]

    def __contains__(self, v) -> bool:
        return member(self, v)

    def contains(self, v) -> bool:
        return member(self, v)

    def issubset(self, other: "Subspace") -> bool:
        return all(member(other, b) for b in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubset(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def coordinates(self, v: Sequence) -> Vector | None:
        """Coefficients of ``v`` in the stored basis, or None if ``v`` is outside."""
        if len(v) != self.ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        coeffs = tuple(as_rational(v[p]) for p in self.pivots)
        recon = zero_vector(self.ambient_dim)
        for c, b in zip(coeffs, self.basis):
            if c:
                recon = vadd(recon, vscale(c, b))
        return coeffs if tuple(recon) == tuple(as_rational(a) for a in v) else None

    def annihilator(self) -> "Subspace":
        """Linear functionals (as coordinate vectors) vanishing on the subspace."""
        if not self.basis:
            return Subspace.full(self.ambient_dim)
        return nullspace(RatMatrix(self.basis, ncols=self.ambient_dim))

    def complement_indices(self) -> list:
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def __repr__(self):
        vecs = ", ".join("(" + ", ".join(format_rational(a) for a in b) + ")" for b in self.basis)
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim}: {vecs})"


def nullspace(m: RatMatrix) -> Subspace:
    red, pivots = rref(m)
    n = m.ncols
    free = [j for j in range(n) if j not in set(pivots)]
    vectors = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r, fcol]
        vectors.append(v)
    return Subspace.span(vectors, n)


def member(s: Subspace, v: Sequence) -> bool:
    if len(v) != s.ambient_dim:
        raise DimensionError(f"vector of length {len(v)} in ambient dimension {s.ambient_dim}")
    residual = [as_rational(a) for a in v]
    for b, p in zip(s.basis, s.pivots):
        c = residual[p]
        if c:
            residual = [x - c * y for x, y in zip(residual, b)]
    return all(x == 0 for x in residual)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("ambient dimensions differ")
    return Subspace.span(list(a.basis) + list(b.basis), a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("ambient dimensions differ")
    n = a.ambient_dim
    rows = list(a.annihilator().basis) + list(b.annihilator().basis)
    if not rows:
        return Subspace.full(n)
    return nullspace(RatMatrix(rows, ncols=n))


def solve(m: RatMatrix, rhs: Sequence) -> tuple:
    """Solve ``m @ v = rhs``.

    Returns ``(particular, homogeneous)``; ``particular`` is None when the
    system is inconsistent.  Free variables of the particular solution are 0.
    """
    if len(rhs) != m.nrows:
        raise DimensionError(f"right-hand side of length {len(rhs)} for {m.nrows} equations")
    n = m.ncols
    aug = RatMatrix([list(r) + [as_rational(c)] for r, c in zip(m.rows, rhs)], ncols=n + 1) if m.nrows else RatMatrix.zeros(0, n + 1)
    red, pivots = rref(aug)
    homogeneous = nullspace(m)
    if n in pivots:
        return None, homogeneous
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = red[r, n]
    return tuple(x), homogeneous


def column_space(m: RatMatrix) -> Subspace:
    return Subspace.span(m.columns(), m.nrows)
