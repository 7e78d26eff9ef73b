"""Quadratic algebras, their dual corings, and pre-Koszul pairs.

A presentation is a generator space ``V`` with a relation subspace
``W`` of ``V (x) V``.  The algebra is ``A^n = V^{(x)n} / I_n`` with
``I_n`` the degree-``n`` part of the ideal generated by ``W``; the
coring is ``C^n``, the intersection of the pieces
``V^{(x)i} (x) W (x) V^{(x)(n-i-2)}``, with ``C^0 = k``, ``C^1 = V`` and
``C^2 = W``.

Every graded object is truncated at a degree bound ``max_degree``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
import random

from .exceptions import ConsistencyError, DimensionMismatchError, KoszulError
from .linalg import (Field, Matrix, Subspace, kronecker, quotient_map, quotient_section,
                     subspace_intersect, swap_matrix, permutation_matrix)

__all__ = [
    "QuadraticPresentation", "GradedAlgebra", "GradedCoring", "PreKoszulPair",
    "build_algebra", "build_coring", "build_pair", "check_prekoszul",
    "prekoszul_composite", "check_generated_degree_one", "check_cogenerated_degree_one",
    "iterated_multiplication", "iterated_comultiplication", "opposite_pair",
    "truncate_coring", "word_reversal",
    "polynomial_presentation", "exterior_presentation", "free_presentation",
    "quantum_plane_presentation", "random_presentation",
]


def _ident(f: Field, n: int) -> Matrix:
    return Matrix.identity(f, n)


@dataclass(frozen=True, eq=False)
class QuadraticPresentation:
    """Generators (a basis of ``V``) and the relation subspace ``W`` of ``V (x) V``."""

    field: Field
    generators: tuple
    relations: Subspace
    name: str = ""

    def __post_init__(self):
        gens = tuple(str(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if len(set(gens)) != len(gens):
            raise ValueError(f"generator names must be distinct: {gens}")
        n = len(gens)
        if self.relations.ambient_dim != n * n:
            raise DimensionMismatchError(
                f"relations live in dimension {self.relations.ambient_dim}, expected {n * n}")
        if n and self.relations.field != self.field:
            raise ValueError("relations are over a different field")

    @classmethod
    def from_relations(cls, field: Field, generators, relations, name: str = ""):
        """``relations`` is a list of ``{(g1, g2): coeff}`` with generator names or indices."""
        gens = [str(g) for g in generators]
        index = {g: i for i, g in enumerate(gens)}
        n = len(gens)
        entries = []
        for col, rel in enumerate(relations):
            for word, c in rel.items():
                if len(word) != 2:
                    raise ValueError(f"relation word {word!r} is not quadratic")
                a, b = (index[w] if isinstance(w, str) else int(w) for w in word)
                entries.append((a * n + b, col, c))
        vecs = Matrix.from_entries(field, n * n, len(relations), entries)
        return cls(field, tuple(gens), Subspace.span(vecs), name)

    @property
    def n_gen(self) -> int:
        return len(self.generators)

    @property
    def relation_matrix(self) -> Matrix:
        return self.relations.basis

    def opposite(self) -> "QuadraticPresentation":
        n = self.n_gen
        flip = swap_matrix(self.field, n, n)
        return QuadraticPresentation(self.field, self.generators,
                                     Subspace.span(flip @ self.relations.basis),
                                     self.name + "^op" if self.name else "")

    def word(self, index: int, degree: int) -> str:
        """Name of the basis word ``index`` of ``V^{(x)degree}``."""
        n = self.n_gen
        letters = []
        for _ in range(degree):
            letters.append(self.generators[index % n])
            index //= n
        return "*".join(reversed(letters)) if letters else "1"

    def __repr__(self):
        return (f"QuadraticPresentation({self.name or '?'}, field={self.field}, "
                f"generators={list(self.generators)}, dim W={self.relations.dim})")


class GradedAlgebra:
    """A connected graded algebra truncated at ``max_degree``.

    ``mult[(p, q)]`` is the matrix of ``A^p (x) A^q -> A^{p+q}``.  When the
    algebra is a quotient of ``T(V)``, ``projections[n]`` is the matrix of
    ``V^{(x)n} -> A^n`` and ``sections[n]`` a right inverse of it.
    """

    def __init__(self, field: Field, dims, mult, projections=None, sections=None):
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        self.max_degree = len(self.dims) - 1
        self.projections = projections
        self.sections = sections
        N = self.max_degree
        mult = dict(mult)
        for n in range(N + 1):
            mult.setdefault((0, n), _ident(field, self.dims[n]))
            mult.setdefault((n, 0), _ident(field, self.dims[n]))
        for (p, q), m in mult.items():
            if p + q > N:
                raise DimensionMismatchError(f"m^{p},{q} exceeds the truncation {N}")
            want = (self.dims[p + q], self.dims[p] * self.dims[q])
            if m.shape != want:
                raise DimensionMismatchError(f"m^{p},{q} has shape {m.shape}, expected {want}")
        missing = [(p, n - p) for n in range(N + 1) for p in range(n + 1) if (p, n - p) not in mult]
        if missing:
            raise ValueError(f"missing multiplication components {missing}")
        self.mult = mult

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.max_degree:
            raise KoszulError(f"degree {n} exceeds the truncation {self.max_degree}")
        return self.dims[n]

    def m(self, p: int, q: int) -> Matrix:
        if p + q > self.max_degree:
            raise KoszulError(f"m^{p},{q} exceeds the truncation {self.max_degree}")
        return self.mult[(p, q)]

    def truncate(self, N: int) -> "GradedAlgebra":
        N = min(N, self.max_degree)
        mult = {k: v for k, v in self.mult.items() if k[0] + k[1] <= N}
        proj = self.projections[:N + 1] if self.projections else None
        sec = self.sections[:N + 1] if self.sections else None
        return GradedAlgebra(self.field, self.dims[:N + 1], mult, proj, sec)

    def __repr__(self):
        return f"GradedAlgebra(dims={list(self.dims)}, field={self.field})"


class GradedCoring:
    """A connected graded coring truncated at ``max_degree``.

    ``comult[(p, q)]`` is the matrix of ``C^{p+q} -> C^p (x) C^q``; for a
    subcoring of ``T(V)``, ``inclusions[n]`` is ``C^n -> V^{(x)n}``.
    """

    def __init__(self, field: Field, dims, comult, inclusions=None):
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        self.max_degree = len(self.dims) - 1
        self.inclusions = inclusions
        N = self.max_degree
        comult = dict(comult)
        for n in range(N + 1):
            comult.setdefault((0, n), _ident(field, self.dims[n]))
            comult.setdefault((n, 0), _ident(field, self.dims[n]))
        for (p, q), d in comult.items():
            if p + q > N:
                raise DimensionMismatchError(f"Delta^{p},{q} exceeds the truncation {N}")
            want = (self.dims[p] * self.dims[q], self.dims[p + q])
            if d.shape != want:
                raise DimensionMismatchError(f"Delta^{p},{q} has shape {d.shape}, expected {want}")
        missing = [(p, n - p) for n in range(N + 1) for p in range(n + 1) if (p, n - p) not in comult]
        if missing:
            raise ValueError(f"missing comultiplication components {missing}")
        self.comult = comult

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.max_degree:
            raise KoszulError(f"degree {n} exceeds the truncation {self.max_degree}")
        return self.dims[n]

    def delta(self, p: int, q: int) -> Matrix:
        if p + q > self.max_degree:
            raise KoszulError(f"Delta^{p},{q} exceeds the truncation {self.max_degree}")
        return self.comult[(p, q)]

    def truncate(self, N: int) -> "GradedCoring":
        N = min(N, self.max_degree)
        comult = {k: v for k, v in self.comult.items() if k[0] + k[1] <= N}
        inc = self.inclusions[:N + 1] if self.inclusions else None
        return GradedCoring(self.field, self.dims[:N + 1], comult, inc)

    def __repr__(self):
        return f"GradedCoring(dims={list(self.dims)}, field={self.field})"


@dataclass(eq=False)
class PreKoszulPair:
    """An algebra, a coring and an isomorphism ``theta: C^1 -> A^1``.

    The pre-Koszul identity is not enforced here (corrupted pairs must be
    representable); use :func:`check_prekoszul`.
    """

    algebra: GradedAlgebra
    coring: GradedCoring
    theta: Matrix
    presentation: QuadraticPresentation | None = None
    name: str = ""
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        a, c = self.algebra, self.coring
        if a.field != c.field:
            raise ValueError("algebra and coring over different fields")
        if a.max_degree != c.max_degree:
            raise DimensionMismatchError(
                f"algebra truncated at {a.max_degree}, coring at {c.max_degree}")
        if a.max_degree >= 1:
            if self.theta.shape != (a.dims[1], c.dims[1]):
                raise DimensionMismatchError(f"theta has shape {self.theta.shape}")
            if not self.theta.is_invertible():
                raise ValueError("theta: C^1 -> A^1 must be invertible")

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def max_degree(self) -> int:
        return self.algebra.max_degree


# builders

def _relation_pieces(p: QuadraticPresentation, n: int, prev: Subspace):
    """Generators of ``V^{(x)(n-2)} (x) W`` and ``prev (x) V``."""
    f, g = p.field, p.n_gen
    left = kronecker(prev.basis, _ident(f, g))
    right = kronecker(_ident(f, g ** (n - 2)), p.relations.basis)
    return left, right


def _check_N(N):
    if int(N) != N or N < 0:
        raise ValueError(f"degree bound must be a non-negative integer, got {N!r}")
    return int(N)


def build_algebra(p: QuadraticPresentation, N: int) -> GradedAlgebra:
    """The quadratic algebra of ``p`` in degrees ``0..N``."""
    N = _check_N(N)
    f, g = p.field, p.n_gen
    projections = [_ident(f, 1)]
    sections = [_ident(f, 1)]
    nonpivots = [[0]]
    ideal = None
    for n in range(1, N + 1):
        amb = g ** n
        if n == 1:
            ideal = Subspace.zero(f, g)
        else:
            # I_n = I_{n-1} (x) V + V^{(x)(n-2)} (x) W
            left, right = _relation_pieces(p, n, ideal)
            ideal = Subspace.span(left.hstack(right))
        projections.append(quotient_map(amb, ideal))
        sections.append(quotient_section(amb, ideal))
        piv = set(ideal.pivots)
        nonpivots.append([j for j in range(amb) if j not in piv])
    dims = [len(nonpivots[n]) for n in range(N + 1)]
    mult = {}
    for n in range(N + 1):
        for a in range(n + 1):
            b = n - a
            # m^{a,b} = pi_n (s_a (x) s_b); the sections pick out basis words
            cols = [i * g ** b + j for i in nonpivots[a] for j in nonpivots[b]]
            mult[(a, b)] = projections[n].select_columns(cols)
    return GradedAlgebra(f, dims, mult, projections, sections)


def build_coring(p: QuadraticPresentation, N: int) -> GradedCoring:
    """The quadratic dual coring of ``p`` in degrees ``0..N``.

    Uses ``C^n = (C^{n-1} (x) V) cap (V^{(x)(n-2)} (x) W)``, which unrolls
    to the full intersection over all positions of ``W``.
    """
    N = _check_N(N)
    f, g = p.field, p.n_gen
    subs = [Subspace.full(f, 1)]
    for n in range(1, N + 1):
        if n == 1:
            subs.append(Subspace.full(f, g))
        elif n == 2:
            subs.append(p.relations)
        else:
            left, right = _relation_pieces(p, n, subs[n - 1])
            subs.append(subspace_intersect(Subspace.span(left), Subspace.span(right)))
    inclusions = [s.basis for s in subs]
    dims = [s.dim for s in subs]
    comult = {}
    for n in range(N + 1):
        for a in range(n + 1):
            b = n - a
            # coordinates in the basis iota_a (x) iota_b: that basis is the identity
            # on the pivot-pair rows, so reading those rows gives the coordinates
            rows = [i * g ** b + j for i in subs[a].pivots for j in subs[b].pivots]
            d = inclusions[n].select_rows(rows)
            if kronecker(inclusions[a], inclusions[b]) @ d != inclusions[n]:
                raise ConsistencyError(
                    f"C^{n} does not factor through C^{a} (x) C^{b}")
            comult[(a, b)] = d
    return GradedCoring(f, dims, comult, inclusions)


def build_pair(p: QuadraticPresentation, N: int) -> PreKoszulPair:
    """``(A_W, C_W)`` with ``theta`` the identity of ``V``."""
    a = build_algebra(p, N)
    c = build_coring(p, N)
    theta = _ident(p.field, p.n_gen if N >= 1 else 0)
    if N < 1:
        theta = Matrix.zeros(p.field, 0, 0)
    return PreKoszulPair(a, c, theta, presentation=p, name=p.name)


# checks

def prekoszul_composite(pair: PreKoszulPair) -> Matrix:
    """``m^{1,1} (theta (x) theta) Delta^{1,1}: C^2 -> A^2``."""
    a, c, t = pair.algebra, pair.coring, pair.theta
    return a.m(1, 1) @ kronecker(t, t) @ c.delta(1, 1)


def check_prekoszul(pair: PreKoszulPair) -> bool:
    if pair.max_degree < 2:
        return True
    return prekoszul_composite(pair).is_zero()


def iterated_multiplication(a: GradedAlgebra, n: int) -> Matrix:
    """``(A^1)^{(x)n} -> A^n``."""
    f = a.field
    if n == 0:
        return _ident(f, 1)
    mu = _ident(f, a.dim(1))
    for k in range(2, n + 1):
        mu = a.m(1, k - 1) @ kronecker(_ident(f, a.dim(1)), mu)
    return mu


def iterated_comultiplication(c: GradedCoring, n: int) -> Matrix:
    """``Delta(n): C^n -> (C^1)^{(x)n}``."""
    f = c.field
    if n == 0:
        return _ident(f, 1)
    d = _ident(f, c.dim(1))
    for k in range(2, n + 1):
        d = kronecker(_ident(f, c.dim(1)), d) @ c.delta(1, k - 1)
    return d


def check_generated_degree_one(a: GradedAlgebra) -> bool:
    return all(iterated_multiplication(a, n).rank() == a.dims[n]
               for n in range(2, a.max_degree + 1))


def check_cogenerated_degree_one(c: GradedCoring) -> bool:
    return all(iterated_comultiplication(c, n).rank() == c.dims[n]
               for n in range(2, c.max_degree + 1))


def word_reversal(field: Field, n_gen: int, degree: int) -> Matrix:
    """Permutation ``v_1...v_d -> v_d...v_1`` of ``V^{(x)degree}``."""
    perm = []
    for idx in range(n_gen ** degree):
        digits = []
        x = idx
        for _ in range(degree):
            digits.append(x % n_gen)
            x //= n_gen
        # digits holds the word reversed already (least significant first)
        r = 0
        for d in digits:
            r = r * n_gen + d
        perm.append(r)
    return permutation_matrix(field, perm)


def opposite_pair(pair: PreKoszulPair) -> PreKoszulPair:
    """``(A^op, C^cop)``: multiplication and comultiplication composed with flips."""
    a, c = pair.algebra, pair.coring
    f, N = a.field, a.max_degree
    mult = {(p, q): a.m(q, p) @ swap_matrix(f, a.dims[p], a.dims[q])
            for (p, q) in a.mult}
    comult = {(p, q): swap_matrix(f, c.dims[q], c.dims[p]) @ c.delta(q, p)
              for (p, q) in c.comult}
    proj = sec = inc = None
    pres = pair.presentation
    if pres is not None and a.projections is not None:
        g = pres.n_gen
        rev = [word_reversal(f, g, n) for n in range(N + 1)]
        proj = [a.projections[n] @ rev[n] for n in range(N + 1)]
        sec = [rev[n] @ a.sections[n] for n in range(N + 1)]
        if c.inclusions is not None:
            inc = [rev[n] @ c.inclusions[n] for n in range(N + 1)]
    return PreKoszulPair(GradedAlgebra(f, a.dims, mult, proj, sec),
                         GradedCoring(f, c.dims, comult, inc),
                         pair.theta,
                         presentation=pres.opposite() if pres is not None else None,
                         name=pair.name + "^op" if pair.name else "")


def truncate_coring(c: GradedCoring, D: int) -> GradedCoring:
    """Replace ``C^n`` by 0 for ``n > D`` (keeps the truncation bound)."""
    f = c.field
    dims = [d if n <= D else 0 for n, d in enumerate(c.dims)]
    comult = {}
    for (p, q), d in c.comult.items():
        if p + q <= D:
            comult[(p, q)] = d
        else:
            comult[(p, q)] = Matrix.zeros(f, dims[p] * dims[q], 0)
    inc = None
    if c.inclusions is not None:
        inc = [m if n <= D else Matrix.zeros(f, m.nrows, 0) for n, m in enumerate(c.inclusions)]
    return GradedCoring(f, dims, comult, inc)


# standard presentations

def polynomial_presentation(field: Field, generators=("x", "y")) -> QuadraticPresentation:
    """Commutative polynomials: relations ``ab - ba`` for ``a < b``."""
    gens = list(generators)
    rels = [{(a, b): 1, (b, a): -1} for i, a in enumerate(gens) for b in gens[i + 1:]]
    return QuadraticPresentation.from_relations(field, gens, rels,
                                                name=f"k[{','.join(gens)}]")


def exterior_presentation(field: Field, generators=("x",)) -> QuadraticPresentation:
    """Exterior algebra: relations ``aa`` and ``ab + ba``."""
    gens = list(generators)
    rels = [{(a, a): 1} for a in gens]
    rels += [{(a, b): 1, (b, a): 1} for i, a in enumerate(gens) for b in gens[i + 1:]]
    return QuadraticPresentation.from_relations(field, gens, rels,
                                                name=f"Lambda({','.join(gens)})")


def free_presentation(field: Field, generators=("x", "y")) -> QuadraticPresentation:
    gens = list(generators)
    return QuadraticPresentation.from_relations(field, gens, [],
                                                name=f"k<{','.join(gens)}>")


def quantum_plane_presentation(field: Field, q, generators=("x", "y")) -> QuadraticPresentation:
    """Relation ``y x = q x y``."""
    x, y = generators
    return QuadraticPresentation.from_relations(
        field, [x, y], [{(y, x): 1, (x, y): -field.element(q)}],
        name=f"quantum plane q={field.format(q)}")


def random_presentation(field: Field, n_gen: int, dim_w: int, rng: random.Random,
                        max_coeff: int = 3) -> QuadraticPresentation:
    """Random relation space of dimension exactly ``dim_w``."""
    if dim_w > n_gen * n_gen:
        raise ValueError("more relations than dim V (x) V")
    gens = [f"x{i}" for i in range(n_gen)]
    while True:
        if field.p is None:
            rows = [[rng.randint(-max_coeff, max_coeff) for _ in range(dim_w)]
                    for _ in range(n_gen * n_gen)]
        else:
            rows = [[rng.randrange(field.p) for _ in range(dim_w)]
                    for _ in range(n_gen * n_gen)]
        m = Matrix.from_rows(field, rows, dim_w)
        if m.rank() == dim_w:
            return QuadraticPresentation(field, tuple(gens), Subspace.span(m),
                                         name=f"random({n_gen},{dim_w})")
