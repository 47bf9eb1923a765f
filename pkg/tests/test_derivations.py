from fractions import Fraction

import pytest

from leibnizkit.algebra import LinearMap, bracket, is_derivation
from leibnizkit.catalog import build, make_nf, make_simple_sl2, make_sl2, printed_sl2_v3_decomposition
from leibnizkit.derivations import (
    compute_der,
    inner_derivations,
    pr_i,
    rigidity_stabilizer,
    stabilizer,
    theta_extended,
    verify_decomposition,
)
from leibnizkit.linalg import RatMatrix
from leibnizkit.twolocal import nf_closed_form

EXPECTED_DIMS = {2: 4, 3: 5, 4: 4, 5: 4}


@pytest.fixture(scope="module")
def simple():
    out = {}
    for m in range(2, 6):
        dec = make_simple_sl2(m)
        out[m] = (dec, compute_der(dec.algebra, dec))
    return out


@pytest.mark.parametrize("m", range(2, 6))
def test_decomposition(simple, m):
    dec, der = simple[m]
    rep = verify_decomposition(dec, der)
    assert rep["ok"] and rep["direct"] and rep["equal"]
    assert rep["dim_der"] == EXPECTED_DIMS[m]
    assert rep["parts"]["inner"] == 3
    assert rep["parts"].get("theta", 0) == (1 if m == 3 else 0)


@pytest.mark.parametrize("m", range(2, 6))
def test_basis_elements_are_derivations(simple, m):
    dec, der = simple[m]
    assert all(is_derivation(dec.algebra, D) for D in der.maps)
    assert inner_derivations(dec.algebra) <= der.space


def test_canonical_derivations():
    assert is_derivation(make_simple_sl2(2).algebra, pr_i(make_simple_sl2(2)))
    assert is_derivation(make_simple_sl2(3).algebra, theta_extended(make_simple_sl2(3)))
    with pytest.raises(ValueError):
        theta_extended(make_simple_sl2(4))


def test_right_multiplication_by_h_on_printed_table():
    dec = printed_sl2_v3_decomposition()
    A = dec.algebra
    R = A.right_mult(A.basis_vector(A.index("h")))
    for k in range(3):
        x = A.basis_vector(A.index(f"x{k}"))
        assert R.apply(x) == tuple((2 - 2 * k) * c for c in x)


@pytest.mark.parametrize("m", range(2, 6))
def test_rigidity(simple, m):
    dec, der = simple[m]
    assert rigidity_stabilizer(dec, der=der).dim == 0


def test_rigidity_contrast_on_sl2():
    A = make_sl2()
    der = compute_der(A)
    h = A.basis_vector(0)
    st = stabilizer(der, h)
    assert st.dim >= 1
    assert st.contains(A.right_mult(h).flat())


def test_stabilizer_at_h_alone_is_nontrivial():
    # the module component of h0 + i0 is what forces rigidity
    dec = make_simple_sl2(4)
    der = compute_der(dec.algebra, dec)
    h = dec.algebra.basis_vector(dec.sl2["h"])
    st = stabilizer(der, h)
    assert st.dim >= 1
    for flat in st.basis:
        D = LinearMap.from_flat(dec.algebra, flat)
        assert D(h) == (0,) * dec.algebra.dim


@pytest.mark.parametrize("n", range(2, 9))
def test_nf_derivations_follow_closed_form(n):
    der = compute_der(make_nf(n))
    assert der.dim == n
    for D in der.maps:
        assert D.matrix == nf_closed_form(n, D.matrix.col(0))


def test_nf4_closed_form_shape():
    a = [Fraction(c) for c in (2, 3, 5, 7)]
    D = nf_closed_form(4, a)
    assert D.col(1) == (0, 4, 3, 5)
    assert D.col(2) == (0, 0, 6, 3)
    assert D.col(3) == (0, 0, 0, 8)


def _brute_force_der_dim(A):
    # independent oracle: the derivation identity applied to each elementary matrix
    n = A.dim
    rows = []
    for a in range(n):
        for b in range(n):
            for k in range(n):
                row = []
                for u in range(n * n):
                    i, j = divmod(u, n)
                    E = RatMatrix([[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])
                    D = LinearMap(A, E)
                    x, y = A.basis_vector(a), A.basis_vector(b)
                    val = D(bracket(A, x, y))[k] - bracket(A, D(x), y)[k] - bracket(A, x, D(y))[k]
                    row.append(val)
                rows.append(row)
    return n * n - RatMatrix(rows).rank()


@pytest.mark.parametrize("name,expected", [("nf4", 4), ("f1-n5-zero", 6), ("sl2", 3)])
def test_der_dim_matches_entrywise_oracle(name, expected):
    A = build(name)
    assert compute_der(A).dim == expected == _brute_force_der_dim(A)
