from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from leibnizkit.linalg import (
    DimensionError,
    RatMatrix,
    Subspace,
    format_rational,
    intersect,
    member,
    nullspace,
    parse_rational,
    rref,
    solve,
    subspace_sum,
)

small = st.integers(min_value=-5, max_value=5)


@st.composite
def matrices(draw, max_rows=4, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return RatMatrix([[draw(small) for _ in range(c)] for _ in range(r)])


@st.composite
def subspaces(draw, n=4):
    k = draw(st.integers(0, n))
    return Subspace.span([[draw(small) for _ in range(n)] for _ in range(k)], n)


def test_rref_examples():
    m, piv = rref(RatMatrix([[2, 4], [1, 2]]))
    assert m == RatMatrix([[1, 2], [0, 0]]) and piv == [0]
    m, piv = rref(RatMatrix.identity(3))
    assert m == RatMatrix.identity(3) and piv == [0, 1, 2]
    m, piv = rref(RatMatrix([[0, 1], [1, 0]]))
    assert m == RatMatrix.identity(2) and piv == [0, 1]


def test_nullspace_examples():
    assert nullspace(RatMatrix([[1, 2]])) == Subspace.span([[-2, 1]], 2)
    assert nullspace(RatMatrix.identity(3)).dim == 0
    assert nullspace(RatMatrix.zeros(2, 3)) == Subspace.full(3)


def test_member_examples():
    s = Subspace.span([[1, 0]], 2)
    assert member(s, (3, 0))
    assert not member(s, (0, 1))
    assert member(Subspace.zero(2), (0, 0))
    with pytest.raises(DimensionError):
        member(s, (1, 0, 0))


def test_intersect_and_solve_examples():
    a = Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    b = Subspace.span([[0, 1, 0], [0, 0, 1]], 3)
    assert intersect(a, b) == Subspace.span([[0, 1, 0]], 3)

    x, hom = solve(RatMatrix([[1, 1], [0, 1]]), (3, 1))
    assert x == (2, 1) and hom.dim == 0
    x, hom = solve(RatMatrix([[1, 1]]), (0,))
    assert x == (0, 0) and hom == Subspace.span([[1, -1]], 2)

    x, _ = solve(RatMatrix([[1, 1], [1, 1]]), (1, 2))
    assert x is None


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        intersect(Subspace.zero(2), Subspace.zero(3))
    with pytest.raises(DimensionError):
        solve(RatMatrix([[1, 1]]), (1, 2))


def test_rational_formatting_round_trip():
    for s in ["0", "3", "-7/2", "5/3"]:
        assert format_rational(parse_rational(s)) == s
    assert format_rational(Fraction(4, -6)) == "-2/3"
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_inverse_and_det():
    m = RatMatrix([[2, 1], [1, 1]])
    assert m.det() == 1
    assert m @ m.inverse() == RatMatrix.identity(2)
    assert not RatMatrix([[1, 2], [2, 4]]).is_invertible()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_and_rank_nullity(m):
    ns = nullspace(m)
    for v in ns.basis:
        assert all(c == 0 for c in m.apply(v))
    assert m.rank() + ns.dim == m.ncols


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_idempotent(m):
    r1, p1 = rref(m)
    r2, p2 = rref(r1)
    assert r1 == r2 and p1 == p2


@settings(max_examples=60, deadline=None)
@given(subspaces(), subspaces())
def test_dimension_formula(a, b):
    assert subspace_sum(a, b).dim + intersect(a, b).dim == a.dim + b.dim
    assert intersect(a, b) <= a and a <= subspace_sum(a, b)


@settings(max_examples=40, deadline=None)
@given(subspaces())
def test_canonical_form_is_basis_independent(s):
    # respanning with a shuffled, scaled basis gives the identical echelon basis
    again = Subspace.span([tuple(3 * c for c in v) for v in reversed(s.basis)], s.ambient_dim)
    assert again.basis == s.basis
    assert all(again.pivots[i] < again.pivots[i + 1] for i in range(len(again.pivots) - 1))
