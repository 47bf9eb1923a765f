"""Structure-constant algebras, the right Leibniz identity and basic invariants."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .linalg import (
    DimensionError,
    RatMatrix,
    Subspace,
    as_rational,
    format_rational,
    nullspace,
    parse_rational,
    unit_vector,
    vadd,
    vsub,
    zero_vector,
)


class AlgebraFormatError(ValueError):
    """Malformed algebra description (bad JSON, indices, or rationals)."""


class LeibnizIdentityError(ValueError):
    """A multiplication table fails the right Leibniz identity."""

    def __init__(self, triple, message=None):
        self.triple = triple
        i, j, k = triple
        super().__init__(message or f"Leibniz identity fails on basis triple ({i + 1}, {j + 1}, {k + 1})")


class Algebra:
    """Finite-dimensional algebra given by sparse structure constants.

    ``products[(i, j)]`` is the coordinate vector of ``[e_i, e_j]`` (0-based
    indices); absent pairs multiply to zero.
    """

    def __init__(self, dim: int, products: Mapping, basis_names: Sequence[str] | None = None,
                 name: str = "", check: bool = False):
        self.dim = dim
        self.name = name
        self.basis_names = list(basis_names) if basis_names else [f"e{i + 1}" for i in range(dim)]
        if len(self.basis_names) != dim:
            raise DimensionError("basis_names length differs from dim")
        prods = {}
        for (i, j), v in products.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionError(f"product index ({i}, {j}) out of range")
            if isinstance(v, Mapping):
                dense = [Fraction(0)] * dim
                for k, c in v.items():
                    dense[k] += as_rational(c)
                v = dense
            v = tuple(as_rational(c) for c in v)
            if len(v) != dim:
                raise DimensionError(f"product vector for ({i}, {j}) has {len(v)} coordinates")
            if any(v):
                prods[(i, j)] = v
        self.products = prods
        self.leibniz_checked = False
        if check:
            ok, triple = check_leibniz(self)
            if not ok:
                raise LeibnizIdentityError(triple)
            self.leibniz_checked = True

    def __repr__(self):
        return f"Algebra({self.name or 'unnamed'}, dim={self.dim}, nonzero products={len(self.products)})"

    def __eq__(self, other):
        return isinstance(other, Algebra) and self.dim == other.dim and self.products == other.products

    def product(self, i: int, j: int) -> tuple:
        return self.products.get((i, j), zero_vector(self.dim))

    def basis_vector(self, i: int) -> tuple:
        return unit_vector(self.dim, i)

    def index(self, name: str) -> int:
        return self.basis_names.index(name)

    def right_mult(self, a: Sequence) -> RatMatrix:
        """Matrix of x -> [x, a]; column j is [e_j, a]."""
        return RatMatrix.from_columns([bracket(self, self.basis_vector(j), a) for j in range(self.dim)])

    def left_mult(self, a: Sequence) -> RatMatrix:
        return RatMatrix.from_columns([bracket(self, a, self.basis_vector(j)) for j in range(self.dim)])

    def is_lie(self) -> bool:
        for (i, j), v in self.products.items():
            if self.product(j, i) != tuple(-c for c in v):
                return False
        return all((i, i) not in self.products for i in range(self.dim))


def bracket(A: Algebra, x: Sequence, y: Sequence) -> tuple:
    if len(x) != A.dim or len(y) != A.dim:
        raise DimensionError(f"bracket of vectors of lengths {len(x)}, {len(y)} in a {A.dim}-dimensional algebra")
    out = [Fraction(0)] * A.dim
    for (i, j), v in A.products.items():
        c = x[i] * y[j] if x[i] and y[j] else 0
        if c:
            for k, vk in enumerate(v):
                if vk:
                    out[k] += c * vk
    return tuple(out)


def check_leibniz(A: Algebra) -> tuple:
    """Check [x,[y,z]] = [[x,y],z] - [[x,z],y] on all basis triples.

    Trilinearity of both sides makes basis triples sufficient.  Returns
    ``(True, None)`` or ``(False, (i, j, k))`` with the first failing triple
    (0-based) in lexicographic order.
    """
    n = A.dim
    e = [A.basis_vector(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            xy = A.product(i, j)
            for k in range(n):
                lhs = bracket(A, e[i], A.product(j, k))
                rhs = vsub(bracket(A, xy, e[k]), bracket(A, A.product(i, k), e[j]))
                if lhs != rhs:
                    return False, (i, j, k)
    A.leibniz_checked = True
    return True, None


def squares_ideal(A: Algebra) -> Subspace:
    """Span of all squares [x, x]; equals span of [e_i,e_i] and [e_i,e_j] + [e_j,e_i]."""
    vectors = []
    for i in range(A.dim):
        vectors.append(A.product(i, i))
        for j in range(i + 1, A.dim):
            vectors.append(vadd(A.product(i, j), A.product(j, i)))
    return Subspace.span(vectors, A.dim)


def derived_algebra(A: Algebra) -> Subspace:
    return Subspace.span(A.products.values(), A.dim)


def _bracket_span(A: Algebra, left: Subspace, right: Subspace) -> Subspace:
    return Subspace.span([bracket(A, u, v) for u in left.basis for v in right.basis], A.dim)


def series(A: Algebra, kind: str = "lower_central") -> list:
    """Descending series [L^1, L^2, ...] computed until it stabilises.

    ``kind`` is ``"lower_central"`` (L^{k+1} = [L^k, L]) or ``"derived"``
    (L^[s+1] = [L^[s], L^[s]]).  The stable term appears once, at the end.
    """
    if kind not in ("lower_central", "derived"):
        raise ValueError(f"unknown series kind {kind!r}")
    full = Subspace.full(A.dim)
    terms = [full]
    while True:
        cur = terms[-1]
        nxt = _bracket_span(A, cur, full if kind == "lower_central" else cur)
        if nxt == cur:
            return terms
        terms.append(nxt)
        if nxt.dim == 0:
            return terms


def series_dims(A: Algebra, kind: str = "lower_central") -> list:
    return [s.dim for s in series(A, kind)]


def nilindex(A: Algebra) -> int | None:
    """Smallest t with L^t = 0, or None when the algebra is not nilpotent."""
    terms = series(A, "lower_central")
    return len(terms) if terms[-1].dim == 0 else None


def is_solvable(A: Algebra) -> bool:
    return series(A, "derived")[-1].dim == 0


def is_nilpotent(A: Algebra) -> bool:
    return nilindex(A) is not None


def annihilator(A: Algebra) -> Subspace:
    """{x : [x, y] = [y, x] = 0 for all y}."""
    rows = []
    for j in range(A.dim):
        rows.extend(A.right_mult(A.basis_vector(j)).rows)
        rows.extend(A.left_mult(A.basis_vector(j)).rows)
    return nullspace(RatMatrix(rows, ncols=A.dim))


def classify_nilpotent(A: Algebra) -> str:
    dims = series_dims(A, "lower_central")
    if dims[-1] != 0:
        return "not_nilpotent"
    n = A.dim
    padded = dims + [0] * (n + 2 - len(dims))
    if all(padded[k - 1] == n + 1 - k for k in range(1, n + 2)):
        return "null_filiform"
    if n >= 2 and all(padded[k - 1] == n - k for k in range(2, n + 1)):
        return "filiform"
    return "other_nilpotent"


@dataclass(frozen=True)
class LinearMap:
    """Linear endomorphism of an algebra; column j of ``matrix`` is the image of e_j."""

    algebra: Algebra = field(compare=False)
    matrix: RatMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.algebra.dim, self.algebra.dim):
            raise DimensionError(f"{self.matrix.shape} matrix for a {self.algebra.dim}-dimensional algebra")

    @classmethod
    def from_flat(cls, A: Algebra, flat: Sequence) -> "LinearMap":
        return cls(A, RatMatrix.from_flat(flat, A.dim, A.dim))

    def __call__(self, x: Sequence) -> tuple:
        return self.matrix.apply(x)

    def flat(self) -> tuple:
        return self.matrix.flat()

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.algebra, self.matrix + other.matrix)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.algebra, self.matrix - other.matrix)

    def __rmul__(self, c) -> "LinearMap":
        return LinearMap(self.algebra, self.matrix.scale(c))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.algebra, self.matrix @ other.matrix)

    def inverse(self) -> "LinearMap":
        return LinearMap(self.algebra, self.matrix.inverse())


def is_derivation(A: Algebra, D) -> bool:
    return derivation_violation(A, D) is None


def derivation_violation(A: Algebra, D) -> tuple | None:
    """First basis pair (i, j) with D[e_i,e_j] != [De_i,e_j] + [e_i,De_j], else None."""
    M = D.matrix if isinstance(D, LinearMap) else D
    images = M.columns()
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = M.apply(A.product(i, j))
            rhs = vadd(bracket(A, images[i], A.basis_vector(j)), bracket(A, A.basis_vector(i), images[j]))
            if lhs != rhs:
                return (i, j)
    return None


def is_left_module_trivial(A: Algebra, ideal: Subspace) -> bool:
    """True when [L, I] = 0."""
    return all(
        not any(bracket(A, A.basis_vector(i), v)) for i in range(A.dim) for v in ideal.basis
    )


def is_ideal(A: Algebra, s: Subspace) -> bool:
    for i in range(A.dim):
        e = A.basis_vector(i)
        for v in s.basis:
            if not (s.contains(bracket(A, e, v)) and s.contains(bracket(A, v, e))):
                return False
    return True


def is_subalgebra(A: Algebra, s: Subspace) -> bool:
    return all(s.contains(bracket(A, u, v)) for u in s.basis for v in s.basis)


# JSON format ---------------------------------------------------------------

def algebra_to_dict(A: Algebra) -> dict:
    brackets = []
    for (i, j) in sorted(A.products):
        v = A.products[(i, j)]
        brackets.append([i + 1, j + 1, [[k + 1, format_rational(c)] for k, c in enumerate(v) if c]])
    return {"dim": A.dim, "basis": list(A.basis_names), "brackets": brackets}


def algebra_to_json(A: Algebra) -> str:
    return json.dumps(algebra_to_dict(A), indent=1) + "\n"


def algebra_from_dict(data: Mapping, name: str = "", check: bool = True) -> Algebra:
    try:
        dim = data["dim"]
        basis = data.get("basis") or [f"e{i + 1}" for i in range(dim)]
        raw = data["brackets"]
    except (KeyError, TypeError) as exc:
        raise AlgebraFormatError(f"missing field: {exc}") from exc
    if not isinstance(dim, int) or dim < 1:
        raise AlgebraFormatError(f"dim must be a positive integer, got {dim!r}")
    if len(basis) != dim:
        raise AlgebraFormatError(f"basis has {len(basis)} labels for dim {dim}")
    products: dict = {}
    for entry in raw:
        try:
            i, j, terms = entry
            if (i - 1, j - 1) in products:
                raise AlgebraFormatError(f"pair ({i}, {j}) listed twice")
            vecd = {}
            for k, c in terms:
                if not (isinstance(k, int) and 1 <= k <= dim):
                    raise AlgebraFormatError(f"coordinate index {k!r} out of range")
                if not isinstance(c, (str, int)) or isinstance(c, bool):
                    raise AlgebraFormatError(f"coefficient {c!r} must be a 'p/q' string")
                vecd[k - 1] = vecd.get(k - 1, Fraction(0)) + (parse_rational(c) if isinstance(c, str) else Fraction(c))
        except AlgebraFormatError:
            raise
        except (TypeError, ValueError) as exc:
            raise AlgebraFormatError(f"bad bracket entry {entry!r}: {exc}") from exc
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i <= dim and 1 <= j <= dim):
            raise AlgebraFormatError(f"bracket indices ({i!r}, {j!r}) out of range")
        products[(i - 1, j - 1)] = vecd
    return Algebra(dim, products, basis, name=name, check=check)


def load_algebra(path, check: bool = True) -> Algebra:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"{path}: invalid JSON ({exc})") from exc
    return algebra_from_dict(data, name=path.stem, check=check)


def dump_algebra(A: Algebra, path) -> None:
    Path(path).write_text(algebra_to_json(A), encoding="utf-8")


def map_to_json(M: RatMatrix) -> str:
    return json.dumps([[format_rational(a) for a in r] for r in M.rows]) + "\n"


def map_from_json(text: str, dim: int) -> RatMatrix:
    try:
        data = json.loads(text)
        rows = [[parse_rational(a) if isinstance(a, str) else Fraction(a) for a in r] for r in data]
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise AlgebraFormatError(f"bad map JSON: {exc}") from exc
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise AlgebraFormatError(f"map must be a {dim}x{dim} matrix")
    return RatMatrix(rows, ncols=dim)


def span_of(A: Algebra, indices: Iterable[int]) -> Subspace:
    return Subspace.span([A.basis_vector(i) for i in indices], A.dim)


__all__ = [
    "Algebra", "AlgebraFormatError", "LeibnizIdentityError", "LinearMap",
    "bracket", "check_leibniz", "squares_ideal", "derived_algebra", "series", "series_dims",
    "nilindex", "is_solvable", "is_nilpotent", "annihilator", "classify_nilpotent",
    "is_derivation", "derivation_violation", "is_left_module_trivial", "is_ideal", "is_subalgebra",
    "algebra_to_dict", "algebra_to_json", "algebra_from_dict", "load_algebra", "dump_algebra",
    "map_to_json", "map_from_json", "span_of",
]
