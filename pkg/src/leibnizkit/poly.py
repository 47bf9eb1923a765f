"""Sparse multivariate polynomials over Q and fraction-free matrix elimination.

Terms are stored as ``{exponent tuple: Fraction}`` without zero
coefficients.  Iteration order is graded lexicographic, largest first.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import RatMatrix, as_rational, rref


def grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


class MultiPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
            c = as_rational(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    @classmethod
    def const(cls, c, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int) -> "MultiPoly":
        exp = tuple(1 if k == i else 0 for k in range(nvars))
        return cls(nvars, {exp: 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "MultiPoly":
        """The linear form sum(c_i * x_i)."""
        n = len(coeffs)
        return cls(n, {tuple(1 if k == i else 0 for k in range(n)): c for i, c in enumerate(coeffs)})

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple:
        return max(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable counts {self.nvars} and {other.nvars} differ")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.nvars)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        c = as_rational(c)
        if not c:
            return MultiPoly(self.nvars)
        return MultiPoly._raw(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    def __rmul__(self, other) -> "MultiPoly":
        return self.scale(other)

    def eval_at(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point of length {len(point)} for {self.nvars} variables")
        point = [as_rational(p) for p in point]
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for p, k in zip(point, exp):
                if k:
                    term *= p ** k
            total += term
        return total

    def divexact(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises ArithmeticError if ``other`` does not divide."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lt_e, lt_c = other.leading_term()
        quotient: dict = {}
        rem = self
        while rem.terms:
            e, c = rem.leading_term()
            if any(a < b for a, b in zip(e, lt_e)):
                raise ArithmeticError("division is not exact")
            qe = tuple(a - b for a, b in zip(e, lt_e))
            qc = c / lt_c
            quotient[qe] = qc
            rem = rem - MultiPoly._raw(self.nvars, {qe: qc}) * other
        return MultiPoly._raw(self.nvars, quotient)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(exp) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class PolyMatrix:
    """Matrix with MultiPoly entries, all in the same number of variables."""

    __slots__ = ("nrows", "ncols", "nvars", "_rows")

    def __init__(self, rows: Sequence[Sequence[MultiPoly]], nvars: int, ncols: int | None = None):
        data = tuple(tuple(rows_i) for rows_i in rows)
        width = len(data[0]) if data else (ncols or 0)
        for r in data:
            if len(r) != width:
                raise ValueError("ragged rows")
            for p in r:
                if p.nvars != nvars:
                    raise ValueError("entry with the wrong number of variables")
        self._rows = data
        self.nrows = len(data)
        self.ncols = width
        self.nvars = nvars

    @property
    def rows(self):
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self._rows[i][j] for j in cols] for i in rows], self.nvars, ncols=len(cols))

    def eval_at(self, point: Sequence) -> RatMatrix:
        return RatMatrix([[p.eval_at(point) for p in r] for r in self._rows], ncols=self.ncols)

    def det(self) -> MultiPoly:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if self.nrows == 0:
            return MultiPoly.const(1, self.nvars)
        _, d = _bareiss([list(r) for r in self._rows], self.nvars, square=True)
        return d


def _bareiss(m: list, nvars: int, square: bool = False) -> tuple:
    """Fraction-free elimination with complete pivoting.

    Returns ``(rank, det)``; ``det`` is only meaningful for square input and
    is 0 when the rank is deficient.
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = MultiPoly.const(1, nvars)
    sign = 1
    rank = 0
    for k in range(min(nrows, ncols)):
        pivot = None
        for j in range(k, ncols):
            for i in range(k, nrows):
                if m[i][j].terms:
                    # prefer the sparsest available pivot; keeps intermediate degrees low
                    if pivot is None or len(m[i][j].terms) < len(m[pivot[0]][pivot[1]].terms):
                        pivot = (i, j)
            if pivot is not None:
                break
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            m[k], m[pi] = m[pi], m[k]
            sign = -sign
        if pj != k:
            for row in m:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        pkk = m[k][k]
        for i in range(k + 1, nrows):
            mik = m[i][k]
            for j in range(k + 1, ncols):
                num = m[i][j] * pkk - mik * m[k][j]
                m[i][j] = num.divexact(prev) if num.terms else num
            m[i][k] = MultiPoly(nvars)
        prev = pkk
        rank += 1
    if square:
        det = m[-1][-1] if rank == nrows else MultiPoly(nvars)
        return rank, det.scale(sign) if det.terms else det
    return rank, None


def generic_rank(m: PolyMatrix) -> int:
    """Rank over the field of rational functions, by fraction-free elimination."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    rank, _ = _bareiss([list(r) for r in m.rows], m.nvars)
    return rank


# A column entry that is linear in unknowns u: {u index: MultiPoly in x}.
LinearInU = Mapping


def minor_constraints(m: PolyMatrix, extra_col: Sequence[LinearInU], r: int, n_unknowns: int) -> RatMatrix:
    """Linear conditions on u making every (r+1)-minor of ``[m | extra_col]`` through the last column vanish.

    Each minor is expanded along the appended column; the coefficient of
    every x-monomial gives one homogeneous linear equation in u.  The result
    is returned in reduced echelon form.
    """
    if len(extra_col) != m.nrows:
        raise ValueError("extra column length does not match matrix rows")
    if r + 1 > m.nrows or r > m.ncols:
        return RatMatrix.zeros(0, n_unknowns)
    minor_cache: dict = {}

    def minor(rows: tuple, cols: tuple) -> MultiPoly:
        key = (rows, cols)
        if key not in minor_cache:
            minor_cache[key] = m.submatrix(rows, cols).det()
        return minor_cache[key]

    equations: list = []
    for cols in itertools.combinations(range(m.ncols), r):
        for rows in itertools.combinations(range(m.nrows), r + 1):
            # monomial -> {u: coeff}
            collected: dict = {}
            for t, row in enumerate(rows):
                entry = extra_col[row]
                if not entry:
                    continue
                cof = minor(rows[:t] + rows[t + 1:], cols)
                if cof.is_zero():
                    continue
                sign = -1 if (t + r) % 2 else 1
                for u, coeff_poly in entry.items():
                    prod = coeff_poly * cof
                    for exp, c in prod.terms.items():
                        slot = collected.setdefault(exp, {})
                        slot[u] = slot.get(u, 0) + sign * c
            for exp in sorted(collected, key=grlex_key, reverse=True):
                row_eq = [Fraction(0)] * n_unknowns
                for u, c in collected[exp].items():
                    row_eq[u] += c
                if any(row_eq):
                    equations.append(row_eq)
    if not equations:
        return RatMatrix.zeros(0, n_unknowns)
    red, piv = rref(RatMatrix(_dedupe(equations), ncols=n_unknowns))
    return RatMatrix(red.rows[: len(piv)], ncols=n_unknowns) if piv else RatMatrix.zeros(0, n_unknowns)


def _dedupe(rows: Iterable[list]) -> list:
    seen = set()
    out = []
    for r in rows:
        # normalise by the first nonzero entry so scalar multiples collapse
        lead = next(a for a in r if a)
        key = tuple(a / lead for a in r)
        if key not in seen:
            seen.add(key)
            out.append(list(key))
    return out
