import random
import sys

import pytest
from hypothesis import strategies as st

from koszulpair.graded import (GradedCoring, PreKoszulPair, QuadraticPresentation, build_pair,
                               exterior_presentation, free_presentation, polynomial_presentation,
                               quantum_plane_presentation)
from koszulpair.linalg import Field, Matrix

QQ = Field.rational()
GF5 = Field.gf(5)

# relation vectors in the V (x) V basis (x,x), (x,y), (y,x), (y,y), ... for the oracles
ORACLE_RELATIONS = {
    "poly2": (2, [[0, 1, -1, 0]]),
    "poly3": (3, [[0, 1, 0, -1, 0, 0, 0, 0, 0],
                  [0, 0, 1, 0, 0, 0, -1, 0, 0],
                  [0, 0, 0, 0, 0, 1, 0, -1, 0]]),
    "ext1": (1, [[1]]),
    "ext2": (2, [[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 1, 0]]),
    "free2": (2, []),
}


def presentation(name, field=QQ):
    return {
        "poly2": lambda: polynomial_presentation(field, ("x", "y")),
        "poly3": lambda: polynomial_presentation(field, ("x", "y", "z")),
        "ext1": lambda: exterior_presentation(field, ("x",)),
        "ext2": lambda: exterior_presentation(field, ("x", "y")),
        "free2": lambda: free_presentation(field, ("x", "y")),
    }[name]()


CORPUS = tuple(ORACLE_RELATIONS)

# frozen from oracles.algebra_dims / oracles.coring_dims (test_graded re-derives them)
ALGEBRA_DIMS = {
    "poly2": [1, 2, 3, 4, 5],
    "poly3": [1, 3, 6, 10, 15],
    "ext1": [1, 1, 0, 0, 0],
    "ext2": [1, 2, 1, 0, 0],
    "free2": [1, 2, 4, 8, 16],
}
CORING_DIMS = {
    "poly2": [1, 2, 1, 0, 0],
    "poly3": [1, 3, 3, 1, 0],
    "ext1": [1, 1, 1, 1, 1],
    "ext2": [1, 2, 3, 4, 5],
    "free2": [1, 2, 0, 0, 0],
}


def sign_corrupted_pair(N=4, field=QQ):
    """k[x,y] pair with one entry of Delta^{1,1} negated."""
    pair = build_pair(polynomial_presentation(field), N)
    c = pair.coring
    comult = dict(c.comult)
    d = comult[(1, 1)]
    rows = d.rows()
    rows[2] = [-v for v in rows[2]]
    comult[(1, 1)] = Matrix.from_rows(field, rows, d.ncols)
    bad = GradedCoring(field, c.dims, comult)
    return PreKoszulPair(pair.algebra, bad, pair.theta, name="corrupted")


def koszul_presentation(rng, names):
    """A Koszul quadratic presentation whose relations are homogeneous in every generator
    multidegree, so that diagonal sigmas descend."""
    g = len(names)
    kind = rng.choice(["poly", "ext", "free", "monomial", "qplane"] if g == 2
                      else ["free", "ext"])
    if kind == "poly":
        return polynomial_presentation(GF5, names)
    if kind == "ext":
        return exterior_presentation(GF5, names)
    if kind == "free":
        return free_presentation(GF5, names)
    if kind == "qplane":
        return quantum_plane_presentation(GF5, rng.randint(1, 4), names)
    words = [(a, b) for a in names for b in names]
    chosen = rng.sample(words, rng.randint(1, len(words) - 1))
    return QuadraticPresentation.from_relations(GF5, names, [{w: 1} for w in chosen])


def random_diagonal_twist(rng, N=3):
    nA, nB = rng.choice([(1, 1), (1, 2), (2, 1), (2, 2)])
    pA = koszul_presentation(rng, tuple(f"a{i}" for i in range(nA)))
    pB = koszul_presentation(rng, tuple(f"b{i}" for i in range(nB)))
    entries = []
    for b in range(nB):
        for a in range(nA):
            entries.append((a * nB + b, b * nA + a, rng.randint(1, 4)))
    s11 = Matrix.from_entries(GF5, nA * nB, nB * nA, entries)
    return pA, pB, s11


@pytest.fixture
def rng():
    return random.Random(12345)


def matrices(field, max_rows=4, max_cols=4, shape=None):
    """Hypothesis strategy for small matrices over ``field``; ``shape`` fixes the size."""
    if field.p is None:
        entry = st.integers(-3, 3)
    else:
        entry = st.integers(0, field.p - 1)

    @st.composite
    def build(draw):
        if shape is not None:
            r, c = shape
        else:
            r = draw(st.integers(0, max_rows))
            c = draw(st.integers(0, max_cols))
        rows = [[draw(entry) for _ in range(c)] for _ in range(r)]
        return Matrix.from_rows(field, rows, c)

    return build()


fields = st.sampled_from([QQ, GF5, Field.gf(7)])


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
