"""Nonlinear 2-local derivations built from an annihilator element, and the NF_n rigidity check.

Given a complement V of L^2 with at least two vectors and z in Ann(L), the
map x -> f(l1(x), l2(x)) z, with f(y1, y2) = y1^2 / y2 (0 when y2 = 0) and
l1, l2 the first two V-coordinates, agrees on every pair of points with a
derivation of the form x -> (a l1(x) + b l2(x)) z, yet is not additive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Algebra, LinearMap, annihilator, derived_algebra, is_derivation
from .catalog import make_nf
from .derivations import compute_der
from .linalg import RatMatrix, Subspace, as_rational, format_rational, nullspace, solve, vadd, vscale
from .local import DEFAULT_SEED, random_points


class HypothesisError(ValueError):
    """A structural hypothesis of a construction does not hold."""


def f_hom(y1, y2) -> Fraction:
    y1, y2 = as_rational(y1), as_rational(y2)
    return y1 * y1 / y2 if y2 else Fraction(0)


def complement_functionals(L2: Subspace) -> tuple:
    """Non-pivot coordinate indices of L^2 and the matching coordinate functionals on L = L^2 + span(V)."""
    n = L2.ambient_dim
    free = L2.complement_indices()
    funcs = []
    for j in free:
        # l_j(x) = x_j - sum_p x_p * b_p[j], b_p the echelon basis vector with pivot p
        phi = [Fraction(0)] * n
        phi[j] = Fraction(1)
        for b, p in zip(L2.basis, L2.pivots):
            phi[p] -= b[j]
        funcs.append(tuple(phi))
    return tuple(free), tuple(funcs)


@dataclass(frozen=True)
class TwoLocalMap:
    """x -> f(l1(x), l2(x)) z (+ x when ``shift`` is set, for the automorphism variant)."""

    algebra: Algebra = field(compare=False)
    v_indices: tuple
    functionals: tuple
    z: tuple
    shift: bool = False

    def coords(self, x: Sequence) -> tuple:
        l1, l2 = self.functionals[:2]
        return (sum(a * b for a, b in zip(l1, x)), sum(a * b for a, b in zip(l2, x)))

    def __call__(self, x: Sequence) -> tuple:
        x = tuple(as_rational(c) for c in x)
        out = vscale(f_hom(*self.coords(x)), self.z)
        return vadd(x, out) if self.shift else out

    def linear_witness(self, a, b) -> LinearMap:
        """x -> (a l1(x) + b l2(x)) z, plus the identity when ``shift`` is set."""
        n = self.algebra.dim
        l1, l2 = self.functionals[:2]
        phi = [a * p + b * q for p, q in zip(l1, l2)]
        rows = [[self.z[i] * phi[j] + (1 if (self.shift and i == j) else 0) for j in range(n)] for i in range(n)]
        return LinearMap(self.algebra, RatMatrix(rows))

    def to_dict(self) -> dict:
        return {
            "V": [i + 1 for i in self.v_indices],
            "z": [format_rational(c) for c in self.z],
            "f": "y1^2/y2",
            "shift_by_identity": self.shift,
        }


def _complement_and_z(A: Algebra, z_space: Subspace, z_label: str) -> tuple:
    L2 = derived_algebra(A)
    if L2.dim > A.dim - 2:
        raise HypothesisError(f"(i) violated: dim L^2 = {L2.dim} > n - 2 = {A.dim - 2}")
    if z_space.dim == 0:
        raise HypothesisError(f"(ii) violated: {z_label} = 0")
    v, funcs = complement_functionals(L2)
    return v, funcs, z_space.basis[0]


def build_two_local(A: Algebra) -> TwoLocalMap:
    """Requires (i) dim L^2 <= n - 2 and (ii) Ann(L) != 0."""
    v, funcs, z = _complement_and_z(A, annihilator(A), "Ann(L)")
    return TwoLocalMap(A, v, funcs, z)


@dataclass
class WitnessReport:
    pairs_tested: int = 0
    coefficients: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def solve_pair(T: TwoLocalMap, x: Sequence, y: Sequence):
    """(a, b) with a l1 + b l2 = f(l1, l2) at both x and y, or None if inconsistent."""
    lx, ly = T.coords(x), T.coords(y)
    m = RatMatrix([list(lx), list(ly)])
    sol, _ = solve(m, [f_hom(*lx), f_hom(*ly)])
    return sol


def verify_pairs(T: TwoLocalMap, pairs: Sequence, witness_ok) -> WitnessReport:
    report = WitnessReport()
    seen: dict = {}
    for idx, (x, y) in enumerate(pairs):
        report.pairs_tested += 1
        sol = solve_pair(T, x, y)
        if sol is None:
            report.failures.append((idx, "inconsistent 2x2 system"))
            continue
        report.coefficients.append(sol)
        W = T.linear_witness(*sol)
        if sol not in seen:
            seen[sol] = witness_ok(W)
        if not seen[sol]:
            report.failures.append((idx, f"witness for (a, b) = {sol} rejected"))
        elif W(x) != T(x) or W(y) != T(y):
            report.failures.append((idx, "witness disagrees with the map"))
    return report


def verify_two_local_derivation(T: TwoLocalMap, pairs: Sequence) -> WitnessReport:
    return verify_pairs(T, pairs, lambda W: is_derivation(T.algebra, W))


def nonlinearity_witness(T: TwoLocalMap) -> tuple:
    """(v1, v2) with T(v1 + v2) != T(v1) + T(v2)."""
    n = T.algebra.dim
    v1 = tuple(Fraction(int(i == T.v_indices[0])) for i in range(n))
    v2 = tuple(Fraction(int(i == T.v_indices[1])) for i in range(n))
    if T(vadd(v1, v2)) == vadd(T(v1), T(v2)):
        raise AssertionError("map is additive on the complement basis")
    return v1, v2


def pair_samples(n: int, seed: int = DEFAULT_SEED, extra: int = 0, random_count: int = 50) -> list:
    """All pairs of basis vectors, then all pairs from {e_i + e_j} and seeded random points."""
    e = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    pairs = list(itertools.combinations_with_replacement(e, 2))
    pool = [vadd(a, b) for a, b in itertools.combinations(e, 2)]
    pool += random_points(n, random_count + extra, seed)
    pairs += list(itertools.combinations(pool, 2))
    return pairs


# NF_n --------------------------------------------------------------------------

def nf_closed_form(n: int, alpha: Sequence) -> RatMatrix:
    """Derivation of NF_n with D(e_1) = sum alpha_i e_i, extended by D(e_j) = j a_1 e_j + sum_{i>=2} a_i e_{j+i-1}."""
    alpha = [as_rational(a) for a in alpha]
    cols = []
    for j in range(1, n + 1):
        col = [Fraction(0)] * n
        col[j - 1] += j * alpha[0]
        for i in range(2, n - j + 2):
            col[j + i - 2] += alpha[i - 1]
        cols.append(col)
    return RatMatrix.from_columns(cols)


def nf_rigidity_check(n: int) -> dict:
    """dim Der(NF_n) = n, closed form matches, and D -> D(e_1) is injective on Der."""
    A = make_nf(n)
    der = compute_der(A)
    closed_ok = True
    for D in der.maps:
        if D.matrix != nf_closed_form(n, D.matrix.col(0)):
            closed_ok = False
    # every closed-form map is itself a derivation
    for i in range(n):
        alpha = [int(k == i) for k in range(n)]
        closed_ok = closed_ok and is_derivation(A, nf_closed_form(n, alpha))
    if der.dim:
        evals = RatMatrix.from_columns([D.matrix.col(0) for D in der.maps], nrows=n)
        kernel = nullspace(evals).dim
    else:
        kernel = 0
    return {
        "n": n,
        "dim_der": der.dim,
        "closed_form_matches": closed_ok,
        "evaluation_kernel": kernel,
        "ok": der.dim == n and closed_ok and kernel == 0,
    }
