"""Derivation algebras, inner derivations and the canonical derivations of simple algebras.

Derivations are stored flattened: entry ``i * dim + j`` of a flat vector is
the coefficient of e_i in D(e_j), i.e. the row-major reading of the matrix
whose columns are the images of the basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Algebra, LinearMap, is_derivation
from .catalog import SimpleDecomposition
from .linalg import RatMatrix, Subspace, nullspace, vadd


@dataclass(frozen=True)
class DerivationBasis:
    algebra: Algebra
    space: Subspace
    inner: Subspace
    pr_line: Subspace | None = None
    theta_line: Subspace | None = None

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def maps(self) -> list:
        return [LinearMap.from_flat(self.algebra, b) for b in self.space.basis]

    def contains(self, D) -> bool:
        flat = D.flat() if isinstance(D, (LinearMap, RatMatrix)) else tuple(D)
        return self.space.contains(flat)


def derivation_system(A: Algebra) -> RatMatrix:
    """Linear system in the dim^2 unknowns of D whose kernel is Der(A)."""
    n = A.dim
    prods = {key: [(k, c) for k, c in enumerate(v) if c] for key, v in A.products.items()}
    by_right: dict = {}
    by_left: dict = {}
    for (c, b), terms in prods.items():
        by_right.setdefault(b, []).append((c, terms))
        by_left.setdefault(c, []).append((b, terms))
    rows = set()
    for a in range(n):
        for b in range(n):
            eqs: dict = {}
            # D([e_a, e_b]) = sum_c c_ab^c D(e_c)
            for c, coeff in prods.get((a, b), ()):
                for k in range(n):
                    eqs.setdefault(k, {})
                    eqs[k][k * n + c] = eqs[k].get(k * n + c, 0) + coeff
            # - [D(e_a), e_b] = - sum_c D_ca [e_c, e_b]
            for c, terms in by_right.get(b, ()):
                for k, coeff in terms:
                    eqs.setdefault(k, {})
                    eqs[k][c * n + a] = eqs[k].get(c * n + a, 0) - coeff
            # - [e_a, D(e_b)] = - sum_c D_cb [e_a, e_c]
            for c, terms in by_left.get(a, ()):
                for k, coeff in terms:
                    eqs.setdefault(k, {})
                    eqs[k][c * n + b] = eqs[k].get(c * n + b, 0) - coeff
            for eq in eqs.values():
                if any(eq.values()):
                    rows.add(tuple(sorted((u, Fraction(c)) for u, c in eq.items() if c)))
    dense = []
    for r in sorted(rows):
        row = [Fraction(0)] * (n * n)
        for u, c in r:
            row[u] = c
        dense.append(row)
    return RatMatrix(dense, ncols=n * n) if dense else RatMatrix.zeros(0, n * n)


def inner_derivations(A: Algebra) -> Subspace:
    """Span of the right multiplications R_a(x) = [x, a] over basis elements a."""
    return Subspace.span([A.right_mult(A.basis_vector(a)).flat() for a in range(A.dim)], A.dim * A.dim)


def pr_i(dec: SimpleDecomposition) -> LinearMap:
    """Projection of L onto I along G."""
    n = dec.algebra.dim
    rows = [[1 if (i == j and i in dec.i_indices) else 0 for j in range(n)] for i in range(n)]
    return LinearMap(dec.algebra, RatMatrix(rows))


def theta_extended(dec: SimpleDecomposition) -> LinearMap:
    """theta on G, extended by zero on I."""
    if dec.theta is None:
        raise ValueError("decomposition has no module isomorphism G -> I")
    A = dec.algebra
    cols = [dec.theta_of(A.basis_vector(j)) if j in dec.g_indices else (0,) * A.dim for j in range(A.dim)]
    return LinearMap(A, RatMatrix.from_columns(cols, nrows=A.dim))


def compute_der(A: Algebra, dec: SimpleDecomposition | None = None) -> DerivationBasis:
    n = A.dim
    space = nullspace(derivation_system(A))
    pr_line = theta_line = None
    if dec is not None:
        pr_line = Subspace.span([pr_i(dec).flat()], n * n)
        if dec.theta is not None:
            theta_line = Subspace.span([theta_extended(dec).flat()], n * n)
    return DerivationBasis(A, space, inner_derivations(A), pr_line, theta_line)


def verify_decomposition(dec: SimpleDecomposition, der: DerivationBasis | None = None) -> dict:
    """Check Der = inner + <pr_I> (+ <theta> when dim G = dim I) as an exact direct sum."""
    der = der or compute_der(dec.algebra, dec)
    parts = [("inner", der.inner)]
    if der.theta_line is not None:
        parts.append(("theta", der.theta_line))
    parts.append(("pr_I", der.pr_line))
    total = Subspace.zero(der.space.ambient_dim)
    for _, s in parts:
        total = total + s
    direct = total.dim == sum(s.dim for _, s in parts)
    members_ok = all(is_derivation(dec.algebra, LinearMap.from_flat(dec.algebra, b)) for _, s in parts for b in s.basis)
    equal = total == der.space
    return {
        "algebra": dec.algebra.name,
        "dim_der": der.dim,
        "parts": {name: s.dim for name, s in parts},
        "direct": direct,
        "parts_are_derivations": members_ok,
        "equal": equal,
        "ok": direct and equal and members_ok,
    }


def stabilizer(der: DerivationBasis, point: Sequence) -> Subspace:
    """{D in Der : D(point) = 0} as a subspace of flattened maps."""
    A = der.algebra
    maps = der.maps
    n2 = A.dim * A.dim
    if not maps:
        return Subspace.zero(n2)
    evals = RatMatrix.from_columns([D(point) for D in maps], nrows=A.dim)
    kernel = nullspace(evals)
    out = []
    for coeffs in kernel.basis:
        flat = (Fraction(0),) * n2
        for c, b in zip(coeffs, der.space.basis):
            if c:
                flat = vadd(flat, tuple(c * x for x in b))
        out.append(flat)
    return Subspace.span(out, n2)


def rigidity_stabilizer(dec: SimpleDecomposition, point: Sequence | None = None,
                        der: DerivationBasis | None = None) -> Subspace:
    """Derivations killing h0 + i0 (or ``point`` when given)."""
    der = der or compute_der(dec.algebra, dec)
    if point is None:
        point = vadd(dec.h0, dec.i0)
    return stabilizer(der, point)


def vanishes_on(A: Algebra, flat: Sequence, indices: Sequence[int]) -> bool:
    D = LinearMap.from_flat(A, flat)
    return all(not any(D(A.basis_vector(i))) for i in indices)


def right_mult_map(A: Algebra, a: Sequence) -> LinearMap:
    return LinearMap(A, A.right_mult(a))


__all__ = [
    "DerivationBasis",
    "compute_der",
    "derivation_system",
    "inner_derivations",
    "pr_i",
    "right_mult_map",
    "rigidity_stabilizer",
    "stabilizer",
    "theta_extended",
    "vanishes_on",
    "verify_decomposition",
]
