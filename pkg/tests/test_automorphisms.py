import random
from fractions import Fraction

import pytest

from leibnizkit.algebra import LinearMap
from leibnizkit.catalog import build, make_nf, make_simple_sl2, make_sl2, printed_sl2_v3_decomposition
from leibnizkit.automorphisms import (
    SlTwoAutParams,
    bidiagonal_form,
    build_simple_aut,
    build_two_local_aut,
    decompose_blocks,
    endpoint_checks,
    fixed_point_solutions,
    highest_weight_eigen_machinery,
    is_automorphism,
    nf_automorphism,
    nf_aut_suite,
    nf_reconstruct,
    preserves_squares_ideal,
    rigidity_aut_check,
    sl2_v3_fixed_point_analysis,
    torus_exponents,
    verify_two_local_aut,
)
from leibnizkit.linalg import RatMatrix, unit_vector, vadd
from leibnizkit.twolocal import HypothesisError, nonlinearity_witness, pair_samples


def test_is_automorphism_examples():
    A = make_nf(4)
    assert is_automorphism(A, RatMatrix.identity(4))[0]
    assert is_automorphism(A, nf_automorphism(4, (1, 1, 0, 0)))[0]
    ok, why = is_automorphism(make_sl2(), RatMatrix.identity(3).scale(2))
    assert not ok and why


def test_params_validated():
    with pytest.raises(ValueError):
        SlTwoAutParams(0)
    with pytest.raises(ValueError):
        SlTwoAutParams(1, 0, 0)
    with pytest.raises(ValueError):
        build_simple_aut(make_simple_sl2(4), SlTwoAutParams(1, 1, 1))


@pytest.mark.parametrize("m", range(2, 6))
def test_identity_parameters(m):
    dec = make_simple_sl2(m)
    aut = build_simple_aut(dec, SlTwoAutParams(1))
    assert aut.map.matrix == RatMatrix.identity(dec.algebra.dim)


def test_identity_blocks_on_v2():
    dec = make_simple_sl2(2)
    blk = decompose_blocks(dec, LinearMap(dec.algebra, RatMatrix.identity(5)))
    assert blk.phi_gg == RatMatrix.identity(3)
    assert not any(blk.phi_gi.flat())
    assert blk.phi_ii == RatMatrix.identity(2)


def test_printed_second_solution_blocks():
    dec = printed_sl2_v3_decomposition()
    aut = build_simple_aut(dec, SlTwoAutParams(-1, 1, -1))
    blk = decompose_blocks(dec, aut.map)
    assert blk.omega == 1
    A = dec.algebra
    pos = {A.basis_names[g]: k for k, g in enumerate(dec.g_indices)}
    assert blk.phi_gg[pos["h"], pos["h"]] == 1
    assert blk.phi_gg[pos["e"], pos["e"]] == -1 and blk.phi_gg[pos["f"], pos["f"]] == -1
    assert blk.phi_ii == (dec.theta @ blk.phi_gg @ dec.theta.inverse()).scale(-1)
    assert blk.phi_gi == dec.theta @ blk.phi_gg


@pytest.mark.parametrize("t", [2, Fraction(-1, 3)])
def test_schur_vanishing_on_v4(t):
    dec = make_simple_sl2(4)
    blk = decompose_blocks(dec, build_simple_aut(dec, SlTwoAutParams(t, 0, 5)).map)
    assert not any(blk.phi_gi.flat())


def test_decompose_rejects_non_automorphism():
    dec = make_simple_sl2(2)
    with pytest.raises(ValueError):
        decompose_blocks(dec, LinearMap(dec.algebra, RatMatrix.identity(5).scale(2)))


@pytest.mark.parametrize("m", (2, 3, 4))
def test_group_closure(m):
    dec = make_simple_sl2(m)
    A = dec.algebra
    rng = random.Random(m)

    def rnd():
        return Fraction(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 5))

    for _ in range(20):
        p = SlTwoAutParams(rnd(), rnd() if m == 3 else 0, rnd())
        q = SlTwoAutParams(rnd(), rnd() if m == 3 else 0, rnd())
        a, b = build_simple_aut(dec, p).map, build_simple_aut(dec, q).map
        assert is_automorphism(A, a @ b)[0]
        assert is_automorphism(A, a.inverse())[0]
        assert preserves_squares_ideal(A, a)


@pytest.mark.parametrize("m", (2, 3, 4))
def test_endpoints(m):
    rep = endpoint_checks(make_simple_sl2(m))
    assert all(rep.values())


def test_printed_fixed_points():
    res = sl2_v3_fixed_point_analysis()
    sols = {s["params"]: s for s in res["solutions"]}
    assert set(sols) == {(1, 0, 1), (-1, 1, -1)}
    for s in sols.values():
        assert s["is_automorphism"] and s["fixes_point"]
        assert s["map"](res["point"]) == tuple(res["point"])
    assert sols[(1, 0, 1)]["is_identity"]
    assert not sols[(-1, 1, -1)]["is_identity"]
    dec = printed_sl2_v3_decomposition()
    A = dec.algebra
    e, f = A.basis_vector(A.index("e")), A.basis_vector(A.index("f"))
    assert sols[(-1, 1, -1)]["gg_e_image"] == tuple(-c for c in e)
    assert sols[(-1, 1, -1)]["gg_f_image"] == tuple(-c for c in f)


def test_printed_point():
    res = sl2_v3_fixed_point_analysis()
    A = printed_sl2_v3_decomposition().algebra
    expected = [0] * 6
    for s in ("h", "x0", "x1", "x2"):
        expected[A.index(s)] = 1
    assert res["point"] == tuple(expected)


@pytest.mark.parametrize("m", (2, 4, 5))
def test_rigidity_unique_identity(m):
    rep = rigidity_aut_check(make_simple_sl2(m))
    assert rep["unique_identity"] and rep["exponents_injective"]


def test_rigidity_routes_isomorphic_case():
    assert rigidity_aut_check(make_simple_sl2(3))["skipped"]


def test_torus_exponents_are_weight_steps():
    # the I-block scales weight vectors by consecutive powers of t
    for m in range(2, 6):
        s = sorted(torus_exponents(make_simple_sl2(m)))
        assert s == list(range(s[0], s[0] + m))


def test_fixed_points_for_other_points():
    dec = make_simple_sl2(4)
    res = fixed_point_solutions(dec)
    assert len(res["solutions"]) == 1


def test_nf_examples():
    M = nf_automorphism(3, (1, 1, 0))
    assert M.col(1) == (0, 1, 1) and M.col(2) == (0, 0, 1)
    assert is_automorphism(make_nf(3), M)[0]
    assert nf_automorphism(4, (0, 1, 2, 3)).det() == 0
    assert nf_automorphism(5, (1, 0, 0, 0, 0)) == RatMatrix.identity(5)
    assert nf_reconstruct(make_nf(3), (1, 1, 0)) == M


@pytest.mark.parametrize("n", range(3, 9))
def test_nf_aut_suite(n):
    assert nf_aut_suite(n)["ok"]


def test_two_local_aut_on_f1():
    A = build("f1-n5-zero")
    T = build_two_local_aut(A)
    assert T.z == unit_vector(5, 4)
    W = T.linear_witness(3, -2)
    assert is_automorphism(A, W)[0]
    e1, e2 = unit_vector(5, 0), unit_vector(5, 1)
    assert T(vadd(e1, e2)) == (1, 1, 0, 0, 1)
    assert vadd(T(e1), T(e2)) == (1, 1, 0, 0, 0)
    v1, v2 = nonlinearity_witness(T)
    assert T(vadd(v1, v2)) != vadd(T(v1), T(v2))
    rep = verify_two_local_aut(T, pair_samples(5, random_count=15))
    assert rep.passed


def test_two_local_aut_rejects_nf5():
    with pytest.raises(HypothesisError, match=r"\(i\) violated"):
        build_two_local_aut(make_nf(5))


def test_machinery_n2():
    rep = highest_weight_eigen_machinery(2)
    assert rep["matrix"] == RatMatrix([[2, 0, 0], [1, 0, 0], [0, 1, -2]])
    assert rep["eigenvector"] == (1, Fraction(1, 2), Fraction(1, 8))
    assert rep["ok"]


@pytest.mark.parametrize("n", range(1, 7))
def test_machinery_recurrence(n):
    rep = highest_weight_eigen_machinery(n, omegas=2)
    assert rep["matches_bidiagonal"] and rep["recurrence"] and rep["t0_nonzero"]
    assert rep["matrix"] == bidiagonal_form(n)


def test_lambda_zero_is_not_automorphism():
    dec = make_simple_sl2(3)
    A = dec.algebra
    M = RatMatrix.identity(6)
    rows = [list(r) for r in M.rows]
    for i in dec.i_indices:
        rows[i][i] = 0
    for b, rb in enumerate(dec.i_indices):
        for a, ra in enumerate(dec.g_indices):
            rows[rb][ra] = 3 * dec.theta[b, a]
    assert not is_automorphism(A, RatMatrix(rows))[0]
