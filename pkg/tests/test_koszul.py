import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import CORPUS, GF5, QQ, presentation, sign_corrupted_pair
from koszulpair.complexes import euler_characteristic, homology_dims, is_exact
from koszulpair.exceptions import KoszulError, PreKoszulError
from koszulpair.graded import (PreKoszulPair, QuadraticPresentation, build_algebra, build_coring,
                               build_pair, check_cogenerated_degree_one,
                               check_generated_degree_one, free_presentation, opposite_pair,
                               polynomial_presentation, random_presentation, truncate_coring)
from koszulpair.koszul import (ComplexFlavor, KoszulMaps, build_slice, koszul_verdict,
                               slice_exactness, theorem_equivalence_check)
from koszulpair.linalg import Matrix, Subspace

FLAVORS = list(ComplexFlavor)


@pytest.fixture(scope="module")
def poly_pair():
    return build_pair(polynomial_presentation(QQ), 5)


def truncated_pair(N=2):
    pair = build_pair(polynomial_presentation(QQ), N)
    return PreKoszulPair(pair.algebra, truncate_coring(pair.coring, 1), pair.theta)


def test_six_flavors():
    assert len(FLAVORS) == 6
    assert len({f.symbol for f in FLAVORS}) == 6
    assert ComplexFlavor("left-comodule") is ComplexFlavor.LEFT_COMODULE


def test_left_comodule_slice_m2(poly_pair):
    cx = build_slice(poly_pair, ComplexFlavor.LEFT_COMODULE, 2)
    # augmentation R sits in slice 0 only, so position -1 is zero here
    assert list(cx.component_dims) == [0, 1, 4, 3]
    assert cx.start == -1
    assert cx.square_defects() == []
    ranks = [oracles.rank(d.rows()) if d.nrows and d.ncols else 0 for d in cx.differentials]
    assert ranks == [0, 1, 3]
    assert homology_dims(cx) == oracles.homology_from_ranks([0, 1, 4, 3], ranks, chain=False)
    assert is_exact(cx)


def test_left_comodule_slice_m3_exact(poly_pair):
    cx = build_slice(poly_pair, ComplexFlavor.LEFT_COMODULE, 3)
    assert list(cx.component_dims) == [0, 0, 2, 6, 4]
    assert is_exact(cx)


def test_unaugmented_slice_drops_position_minus_one(poly_pair):
    cx = build_slice(poly_pair, ComplexFlavor.LEFT_COMODULE, 2, augmented=False)
    assert list(cx.component_dims) == [1, 4, 3]
    assert cx.start == 0


@pytest.mark.parametrize("flavor", FLAVORS)
@pytest.mark.parametrize("name", CORPUS)
def test_degree_zero_slice_is_exact(name, flavor):
    pair = build_pair(presentation(name), 3)
    cx = build_slice(pair, flavor, 0)
    assert list(cx.component_dims) == [1, 1]
    assert is_exact(cx)


def test_refuses_non_prekoszul_pair():
    a = build_algebra(polynomial_presentation(QQ), 3)
    full = QuadraticPresentation(QQ, ("x", "y"), Subspace.full(QQ, 4))
    pair = PreKoszulPair(a, build_coring(full, 3), Matrix.identity(QQ, 2))
    for fl in FLAVORS:
        with pytest.raises(PreKoszulError, match="d o d"):
            build_slice(pair, fl, 2)
    with pytest.raises(PreKoszulError):
        koszul_verdict(pair, 3)


def test_refuses_sign_corrupted_pair():
    with pytest.raises(PreKoszulError, match=r"C\^2 -> A\^2"):
        build_slice(sign_corrupted_pair(), ComplexFlavor.LEFT_COMODULE, 2)


def test_slice_degree_out_of_range(poly_pair):
    with pytest.raises(KoszulError):
        build_slice(poly_pair, ComplexFlavor.BIMODULE, 6)
    with pytest.raises(KoszulError):
        koszul_verdict(poly_pair, 6)


def test_polynomial_pair_koszul_up_to_5(poly_pair):
    v = koszul_verdict(poly_pair, 5)
    assert v.koszul
    assert v.koszul_up_to == 5
    assert v.witness_degree is None
    assert len(v.table) == 6 and all(len(row) == 6 and all(row) for row in v.table.values())
    assert theorem_equivalence_check(poly_pair, 5, v)


def test_tensor_pair_koszul_up_to_5():
    v = koszul_verdict(build_pair(free_presentation(QQ), 5), 5)
    assert v.koszul and v.koszul_up_to == 5


def test_truncated_coring_fails_at_two_everywhere():
    pair = truncated_pair(2)
    v = koszul_verdict(pair, 2)
    assert not v.koszul
    assert v.koszul_up_to is None
    assert v.witness_degree == 2
    assert set(v.failing_flavors(2)) == set(FLAVORS)
    assert v.failing_flavors(1) == []
    assert theorem_equivalence_check(pair, 2)
    cx = build_slice(pair, ComplexFlavor.LEFT_COMODULE, 2)
    assert list(cx.component_dims) == [0, 0, 4, 3]
    assert euler_characteristic(cx) == -1
    assert v.homology[(ComplexFlavor.LEFT_COMODULE, 2)] == homology_dims(cx)


def test_slice_exactness_returns_homology(poly_pair):
    ok, h = slice_exactness(poly_pair, ComplexFlavor.BICOMODULE, 2)
    assert ok and h == [0, 0, 0, 0]


@pytest.mark.parametrize("name", CORPUS)
def test_reflection_identity(name):
    pair = build_pair(presentation(name), 4)
    maps = KoszulMaps(pair)
    for m in range(5):
        left = build_slice(pair, ComplexFlavor.LEFT_COMODULE, m, augmented=False, maps=maps)
        right = build_slice(pair, ComplexFlavor.RIGHT_MODULE, m, augmented=False, maps=maps)
        assert list(left.component_dims) == list(reversed(right.component_dims))
        assert homology_dims(left) == list(reversed(homology_dims(right)))


def test_bimodule_slices_have_zero_euler_characteristic_when_exact(poly_pair):
    maps = KoszulMaps(poly_pair)
    for fl in FLAVORS:
        for m in range(5):
            cx = build_slice(poly_pair, fl, m, maps=maps)
            assert is_exact(cx)
            assert euler_characteristic(cx) == 0


def _random_pair(seed, N=4):
    rng = random.Random(seed)
    g = rng.choice([2, 3])
    return build_pair(random_presentation(GF5, g, rng.choice([1, 2]), rng), N if g == 2 else 3)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_pairs_properties(seed):
    pair = _random_pair(seed)
    N = pair.max_degree
    v = koszul_verdict(pair, N)
    maps = KoszulMaps(pair)
    for fl in FLAVORS:
        for m in range(N + 1):
            cx = build_slice(pair, fl, m, maps=maps)
            assert cx.square_defects() == []
            if v.table[fl][m]:
                assert euler_characteristic(cx) == 0
    # reflection identity holds whether or not the pair is Koszul
    for m in range(N + 1):
        left = build_slice(pair, ComplexFlavor.LEFT_COMODULE, m, augmented=False, maps=maps)
        right = build_slice(pair, ComplexFlavor.RIGHT_MODULE, m, augmented=False, maps=maps)
        assert homology_dims(left) == list(reversed(homology_dims(right)))
    if v.koszul:
        assert check_generated_degree_one(pair.algebra)
        assert check_cogenerated_degree_one(pair.coring)
    assert koszul_verdict(opposite_pair(pair), N).table == v.table


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_six_way_agreement_on_random_quadratic_pairs(seed):
    rng = random.Random(seed)
    pair = build_pair(random_presentation(GF5, 2, 1, rng), 4)
    v = koszul_verdict(pair, 4)
    assert all(v.agreement())
    assert theorem_equivalence_check(pair, 4, v)


def test_opposite_invariance_on_corpus():
    for name in CORPUS:
        pair = build_pair(presentation(name), 3)
        assert koszul_verdict(opposite_pair(pair), 3).table == koszul_verdict(pair, 3).table


def test_per_degree_agreement_can_fail_for_non_quadratic_dual():
    # the truncated coring is not the quadratic dual, and at m = 3 only the
    # bicomodule slice happens to be exact; the verdict still reports not-Koszul
    pair = truncated_pair(3)
    v = koszul_verdict(pair, 3)
    assert not v.koszul and v.witness_degree == 2
    assert v.agreement()[:3] == [True, True, True]
