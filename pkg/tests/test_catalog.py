import random
from fractions import Fraction

import pytest

from leibnizkit.algebra import (
    LeibnizIdentityError,
    algebra_to_json,
    annihilator,
    bracket,
    classify_nilpotent,
    derived_algebra,
    is_derivation,
    squares_ideal,
    span_of,
)
from leibnizkit.catalog import (
    GOLDEN_DIR,
    GOLDEN_NAMES,
    PRINTED_RELABELING,
    FiliformParams,
    build,
    catalog_names,
    decomposition,
    golden_filename,
    make_filiform,
    make_nf,
    make_simple_sl2,
    printed_sl2_v3,
    printed_sl2_v3_decomposition,
    relabeling_matrix,
    spin_up,
    two_local_candidates,
)
from leibnizkit.derivations import theta_extended
from leibnizkit.suite import write_golden


def test_nf4_products():
    A = make_nf(4)
    assert set(A.products) == {(0, 0), (1, 0), (2, 0)}
    for i in range(3):
        assert A.product(i, 0) == A.basis_vector(i + 1)


def test_filiform_examples():
    F1 = make_filiform(FiliformParams.zero("F1", 5))
    assert classify_nilpotent(F1) == "filiform"
    assert derived_algebra(F1).dim == 3
    assert annihilator(F1).contains(F1.basis_vector(4))

    F2 = make_filiform(FiliformParams.zero("F2", 5))
    assert classify_nilpotent(F2) == "filiform"
    assert not any(F2.product(1, 1))
    gamma = make_filiform(FiliformParams("F2", 5, (0, 0, 0, 1)))
    assert gamma.product(1, 1) == gamma.basis_vector(4)

    F3 = make_filiform(FiliformParams.zero("F3", 5))
    assert F3.is_lie()
    assert not make_filiform(FiliformParams("F3", 5, (1, 0, 0))).is_lie()


@pytest.mark.parametrize("name", [n for n in catalog_names() if n[0] == "f"])
def test_filiform_variants_are_filiform(name):
    assert classify_nilpotent(build(name)) == "filiform"


def test_filiform_parameters_validated():
    with pytest.raises(ValueError):
        make_filiform(FiliformParams("F1", 5, (0,)))
    with pytest.raises(ValueError):
        make_filiform(FiliformParams("F3", 6, (0, 0, 0), alpha=1))
    with pytest.raises(ValueError):
        make_filiform(FiliformParams("F3", 6, (0, 0, 0), {(1, 3): {4: 1}}))
    with pytest.raises(LeibnizIdentityError, match="basis triple"):
        make_filiform(FiliformParams("F3", 7, (0, 0, 0), {(2, 4): {7: 1}, (1, 4): {6: 1}}))


@pytest.mark.parametrize("m", range(2, 6))
def test_simple_decomposition_invariants(m):
    dec = make_simple_sl2(m)
    dec.validate()
    n = m - 1
    assert sorted(v for _, v in dec.weights) == sorted(n - 2 * k for k in range(m))
    assert sorted(v for _, v in dec.roots) == [-2, 2]
    assert squares_ideal(dec.algebra) == span_of(dec.algebra, dec.i_indices)
    assert (dec.theta is not None) == (m == 3)


def test_v2_weights():
    assert sorted(v for _, v in make_simple_sl2(2).weights) == [-1, 1]


@pytest.mark.parametrize("m", range(2, 6))
def test_module_is_irreducible(m):
    dec = make_simple_sl2(m)
    A = dec.algebra
    I = span_of(A, dec.i_indices)
    rng = random.Random(m)
    for _ in range(10):
        v = [Fraction(0)] * A.dim
        while not any(v):
            for i in dec.i_indices:
                v[i] = Fraction(rng.randint(-5, 5))
        assert spin_up(dec, v) == I


def test_theta_is_module_isomorphism_and_extension_is_derivation():
    for dec in (make_simple_sl2(3), printed_sl2_v3_decomposition()):
        assert dec.theta.is_invertible()
        A = dec.algebra
        for a in dec.g_indices:
            for b in dec.g_indices:
                x, y = A.basis_vector(a), A.basis_vector(b)
                assert dec.theta_of(bracket(A, x, y)) == bracket(A, dec.theta_of(x), y)
        assert is_derivation(A, theta_extended(dec))


def test_printed_theta_values():
    dec = printed_sl2_v3_decomposition()
    A = dec.algebra
    img = {g: dec.theta_of(A.basis_vector(A.index(g))) for g in "hef"}
    x = {k: A.basis_vector(A.index(f"x{k}")) for k in range(3)}
    assert img["h"] == tuple(2 * c for c in x[1])
    assert img["e"] == tuple(2 * c for c in x[0])
    assert img["f"] == x[2]


def test_printed_table_entries():
    A = printed_sl2_v3()
    v = {s: A.basis_vector(A.index(s)) for s in A.basis_names}

    def br(a, b):
        return bracket(A, v[a], v[b])

    def sc(c, s):
        return tuple(c * x for x in v[s])

    assert br("e", "h") == sc(2, "e")
    assert br("h", "f") == sc(2, "f")
    assert br("e", "f") == v["h"]
    for k in range(3):
        assert br(f"x{k}", "h") == sc(2 - 2 * k, f"x{k}")


def test_relabeling_is_an_isomorphism_onto_printed_table():
    A = make_simple_sl2(3).algebra
    B = printed_sl2_v3()
    P = relabeling_matrix()
    assert sorted(PRINTED_RELABELING) == list(range(6))
    for i in range(6):
        for j in range(6):
            lhs = P.apply(bracket(A, A.basis_vector(i), A.basis_vector(j)))
            rhs = bracket(B, P.apply(A.basis_vector(i)), P.apply(A.basis_vector(j)))
            assert lhs == rhs


def test_two_local_candidates():
    names = {A.name for A, _ in two_local_candidates()}
    assert "f1_n5" in names and "abelian3" in names
    assert not any(n.startswith("nf") for n in names)
    for A, cert in two_local_candidates():
        assert cert["dim_L2"] <= A.dim - 2 and cert["dim_ann"] > 0


def test_nf5_excluded_by_square_dimension():
    assert derived_algebra(make_nf(5)).dim == 4


def test_unknown_names():
    with pytest.raises(KeyError):
        build("sl3")
    with pytest.raises(KeyError):
        decomposition("nf4")


def test_golden_files_regenerate_byte_for_byte(tmp_path):
    write_golden(tmp_path)
    for name in GOLDEN_NAMES:
        shipped = (GOLDEN_DIR / golden_filename(name)).read_bytes()
        assert (tmp_path / golden_filename(name)).read_bytes() == shipped, name


def test_golden_matches_constructor():
    for name in GOLDEN_NAMES:
        assert (GOLDEN_DIR / golden_filename(name)).read_text(encoding="utf-8") == algebra_to_json(build(name))
