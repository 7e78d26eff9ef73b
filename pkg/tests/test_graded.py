import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import (ALGEBRA_DIMS, CORING_DIMS, CORPUS, GF5, ORACLE_RELATIONS, QQ,
                      presentation)
from koszulpair.exceptions import DimensionMismatchError, KoszulError
from koszulpair.graded import (GradedAlgebra, GradedCoring, PreKoszulPair, QuadraticPresentation,
                               build_algebra, build_coring, build_pair, check_cogenerated_degree_one,
                               check_generated_degree_one, check_prekoszul, free_presentation,
                               iterated_comultiplication, iterated_multiplication, opposite_pair,
                               polynomial_presentation, quantum_plane_presentation,
                               random_presentation, truncate_coring, word_reversal)
from koszulpair.linalg import Matrix, Subspace, kronecker


def eye(f, n):
    return Matrix.identity(f, n)


@pytest.mark.parametrize("name", CORPUS)
def test_frozen_dims_match_oracle(name):
    g, rels = ORACLE_RELATIONS[name]
    assert oracles.algebra_dims(g, rels, 4) == ALGEBRA_DIMS[name]
    assert oracles.coring_dims(g, rels, 4) == CORING_DIMS[name]


@pytest.mark.parametrize("name", CORPUS)
def test_builder_dims(name):
    p = presentation(name)
    assert list(build_algebra(p, 4).dims) == ALGEBRA_DIMS[name]
    assert list(build_coring(p, 4).dims) == CORING_DIMS[name]


def test_free_coring_is_degree_one_part():
    assert list(build_coring(free_presentation(QQ), 3).dims) == [1, 2, 0, 0]


def test_full_relations_swap_roles():
    p = QuadraticPresentation(QQ, ("x",), Subspace.full(QQ, 1))
    pair = build_pair(p, 4)
    assert list(pair.algebra.dims) == [1, 1, 0, 0, 0]
    assert list(pair.coring.dims) == [1, 1, 1, 1, 1]


def _random_relations(rng, g, k, p):
    return [[rng.randrange(p) for _ in range(g * g)] for _ in range(k)]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 10 ** 6))
def test_builders_match_oracle_over_gf5(g, k, seed):
    rels = _random_relations(random.Random(seed), g, min(k, g * g), 5)
    vecs = Matrix.from_columns(GF5, rels, g * g)
    p = QuadraticPresentation(GF5, tuple(f"x{i}" for i in range(g)), Subspace.span(vecs))
    N = 4 if g < 3 else 3
    assert list(build_algebra(p, N).dims) == oracles.algebra_dims(g, rels, N, 5)
    assert list(build_coring(p, N).dims) == oracles.coring_dims(g, rels, N, 5)


def _assoc_coassoc(pair):
    a, c = pair.algebra, pair.coring
    f, N = a.field, a.max_degree
    for p in range(N + 1):
        for q in range(N + 1 - p):
            for r in range(N + 1 - p - q):
                lhs = a.m(p + q, r) @ kronecker(a.m(p, q), eye(f, a.dims[r]))
                rhs = a.m(p, q + r) @ kronecker(eye(f, a.dims[p]), a.m(q, r))
                assert lhs == rhs
                lhs = kronecker(c.delta(p, q), eye(f, c.dims[r])) @ c.delta(p + q, r)
                rhs = kronecker(eye(f, c.dims[p]), c.delta(q, r)) @ c.delta(p, q + r)
                assert lhs == rhs
        assert c.delta(0, p) == eye(f, c.dims[p]) == c.delta(p, 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(0, 4), st.integers(0, 10 ** 6))
def test_random_pairs_structure(g, k, seed):
    rng = random.Random(seed)
    p = random_presentation(GF5, g, min(k, g * g), rng)
    N = 4 if g < 3 else 3
    pair = build_pair(p, N)
    a, c = pair.algebra, pair.coring
    assert check_prekoszul(pair)
    _assoc_coassoc(pair)
    assert check_generated_degree_one(a) and check_cogenerated_degree_one(c)
    for n in range(2, N + 1):
        # dim C^n <= dim C^{n-1} * dim V
        assert c.dims[n] <= c.dims[n - 1] * g
        # projection compatibility m (pi (x) pi) = pi
        for i in range(n + 1):
            assert (a.m(i, n - i) @ kronecker(a.projections[i], a.projections[n - i])
                    == a.projections[n])
        # dim A^n + dim I^n = g^n
        ideal = g ** n - a.projections[n].rank()
        assert a.dims[n] + ideal == g ** n


def test_projections_and_inclusions_fix_bases():
    pair = build_pair(polynomial_presentation(QQ), 4)
    a, c = pair.algebra, pair.coring
    for n in range(5):
        assert a.projections[n] @ a.sections[n] == eye(QQ, a.dims[n])
        assert c.inclusions[n].rank() == c.dims[n]
        assert iterated_comultiplication(c, n) == c.inclusions[n]


def test_c2_is_relation_space():
    p = polynomial_presentation(QQ)
    c = build_coring(p, 3)
    assert Subspace.span(c.inclusions[2]) == p.relations


def test_pair_basics():
    pair = build_pair(polynomial_presentation(QQ), 4)
    assert pair.theta == eye(QQ, 2)
    assert pair.max_degree == 4
    assert check_prekoszul(pair)
    free = build_pair(free_presentation(QQ), 3)
    assert list(free.coring.dims) == [1, 2, 0, 0]


def test_prekoszul_fails_for_free_against_full():
    a = build_algebra(free_presentation(QQ), 3)
    full = QuadraticPresentation(QQ, ("x", "y"), Subspace.full(QQ, 4))
    c = build_coring(full, 3)
    pair = PreKoszulPair(a, c, eye(QQ, 2))
    assert not check_prekoszul(pair)
    comp = a.m(1, 1) @ c.delta(1, 1)
    assert comp == eye(QQ, 4)


def test_exterior_pair_prekoszul():
    pair = build_pair(presentation("ext1"), 4)
    assert check_prekoszul(pair)
    assert (pair.algebra.m(1, 1) @ pair.coring.delta(1, 1)).shape == (0, 1)


def test_generation_checks_on_handmade_data():
    bad_alg = GradedAlgebra(QQ, [1, 1, 1], {(1, 1): Matrix.zeros(QQ, 1, 1)})
    assert not check_generated_degree_one(bad_alg)
    bad_cor = GradedCoring(QQ, [1, 1, 1], {(1, 1): Matrix.zeros(QQ, 1, 1)})
    assert not check_cogenerated_degree_one(bad_cor)
    div = build_coring(presentation("ext1"), 4)
    assert check_cogenerated_degree_one(div)
    for n in range(1, 5):
        assert iterated_comultiplication(div, n).shape == (1, 1)
        assert iterated_comultiplication(div, n).is_invertible()
    poly = build_algebra(polynomial_presentation(QQ), 4)
    assert check_generated_degree_one(poly)
    assert iterated_multiplication(poly, 3).rank() == 4


def test_graded_objects_validate_shapes():
    with pytest.raises(DimensionMismatchError):
        GradedAlgebra(QQ, [1, 2, 3], {(1, 1): Matrix.zeros(QQ, 3, 3)})
    with pytest.raises(ValueError):
        GradedAlgebra(QQ, [1, 2, 3], {})
    with pytest.raises(DimensionMismatchError):
        GradedCoring(QQ, [1, 2, 1], {(1, 1): Matrix.zeros(QQ, 3, 1)})


def test_pair_validation():
    a = build_algebra(polynomial_presentation(QQ), 3)
    c = build_coring(polynomial_presentation(QQ), 3)
    with pytest.raises(ValueError):
        PreKoszulPair(a, c, Matrix.zeros(QQ, 2, 2))  # theta not invertible
    with pytest.raises(KoszulError):
        PreKoszulPair(a, build_coring(polynomial_presentation(QQ), 2), eye(QQ, 2))


def test_zero_generators():
    p = QuadraticPresentation.from_relations(QQ, [], [])
    pair = build_pair(p, 3)
    assert list(pair.algebra.dims) == [1, 0, 0, 0]
    assert list(pair.coring.dims) == [1, 0, 0, 0]
    assert check_prekoszul(pair)
    assert check_generated_degree_one(pair.algebra)


def test_presentation_validation():
    with pytest.raises(ValueError):
        QuadraticPresentation.from_relations(QQ, ["x", "x"], [])
    with pytest.raises(ValueError):
        QuadraticPresentation.from_relations(QQ, ["x"], [{("x", "x", "x"): 1}])
    with pytest.raises(DimensionMismatchError):
        QuadraticPresentation(QQ, ("x", "y"), Subspace.full(QQ, 3))


def test_quantum_plane_presentation():
    p = quantum_plane_presentation(QQ, 2)
    a = build_algebra(p, 4)
    assert list(a.dims) == [1, 2, 3, 4, 5]
    # y x - 2 x y lies in W
    assert p.relations.contains(Matrix.from_columns(QQ, [[0, -2, 1, 0]]))


# opposites

def test_opposite_pair_of_polynomials():
    pair = build_pair(polynomial_presentation(QQ), 4)
    op = opposite_pair(pair)
    assert op.algebra.dims == pair.algebra.dims
    assert op.coring.dims == pair.coring.dims
    assert check_prekoszul(op)
    _assoc_coassoc(op)


def test_opposite_is_involution():
    pair = build_pair(random_presentation(GF5, 2, 2, random.Random(7)), 4)
    back = opposite_pair(opposite_pair(pair))
    for key in pair.algebra.mult:
        assert back.algebra.m(*key) == pair.algebra.m(*key)
    for key in pair.coring.comult:
        assert back.coring.delta(*key) == pair.coring.delta(*key)


def test_opposite_of_free_pair_is_word_reversal():
    N = 3
    pair = build_pair(free_presentation(QQ), N)
    op = opposite_pair(pair)
    for p in range(N + 1):
        for q in range(N + 1 - p):
            # m_op(u (x) v) = vu, i.e. reversal conjugates m_op into m
            rev_n = word_reversal(QQ, 2, p + q)
            rev_in = kronecker(word_reversal(QQ, 2, p), word_reversal(QQ, 2, q))
            assert rev_n @ op.algebra.m(p, q) == pair.algebra.m(p, q) @ rev_in


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_opposite_preserves_dims_and_prekoszul(seed):
    rng = random.Random(seed)
    pair = build_pair(random_presentation(GF5, 2, rng.randint(0, 4), rng), 4)
    op = opposite_pair(pair)
    assert op.algebra.dims == pair.algebra.dims
    assert op.coring.dims == pair.coring.dims
    assert check_prekoszul(op) == check_prekoszul(pair)
    # the opposite of a quadratic pair is the quadratic pair of the opposite relations
    direct = build_pair(pair.presentation.opposite(), 4)
    assert direct.algebra.dims == op.algebra.dims and direct.coring.dims == op.coring.dims


def test_truncate_coring():
    c = build_coring(polynomial_presentation(QQ), 4)
    t = truncate_coring(c, 1)
    assert list(t.dims) == [1, 2, 0, 0, 0]
    assert t.max_degree == 4
    assert t.delta(1, 0) == c.delta(1, 0)
