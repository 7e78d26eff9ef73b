"""Twisting maps, entwining maps and twisted tensor products of pre-Koszul pairs.

Conventions
-----------
A twisting map between algebras ``sigma: B (x) A -> A (x) B`` is stored
componentwise, ``sigma^{p,q}: B^p (x) A^q -> A^q (x) B^p``.  A twisting map
between corings ``tau: C (x) D -> D (x) C`` and an entwining map
``lambda: C (x) B -> B (x) C`` use the same layout.  The degree ``n`` part
of ``A (x)_sigma B`` (resp. ``C (x)_tau D``) is the direct sum of
``A^i (x) B^{n-i}`` ordered by ``i`` descending.

Generator-level data ``s: X (x) Y -> Y (x) X`` is lifted to tensor powers
by the ladder: ``X`` moves past the ``Y`` factors left to right, and the
rightmost ``X`` factor moves first.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .exceptions import ConsistencyError, DescentError, KoszulError, TwistingError
from .graded import (GradedAlgebra, GradedCoring, PreKoszulPair, QuadraticPresentation,
                     build_algebra, iterated_comultiplication,
                     iterated_multiplication, prekoszul_composite)
from .koszul import ComplexFlavor, KoszulMaps, build_slice
from .linalg import (DirectSum, Field, Matrix, Subspace, TensorSum, block_matrix,
                     extract_block, kernel_basis, kron_all, kronecker)

__all__ = [
    "ALGEBRA_TWIST", "CORING_TWIST", "ENTWINING",
    "TwistingMap", "EntwiningMap", "TwistingMatrixFamily", "FactorizationReport",
    "ladder", "extend_sigma", "check_twist_axioms", "twist_axiom_failures",
    "twisted_algebra", "hat_twist", "check_cotwist_axioms", "cotwist_axiom_failures",
    "twisted_coring", "derive_tau_lambda", "check_entwining_axioms",
    "entwining_axiom_failures", "twisted_pair", "prekoszul_by_summand",
    "verify_factorization", "family_violations", "check_family_conditions",
    "matrix_twisting_build", "check_siglamb", "flip_twist",
]

ALGEBRA_TWIST = "algebra-twist"
CORING_TWIST = "coring-twist"
ENTWINING = "entwining"


def _eye(f: Field, n: int) -> Matrix:
    return Matrix.identity(f, n)


@dataclass(eq=False)
class TwistingMap:
    """Components ``X^p (x) Y^q -> Y^q (x) X^p`` for ``p + q <= max_degree``.

    ``left_dims`` are the dimensions of ``X`` (``B`` for an algebra twist,
    ``C`` for a coring twist), ``right_dims`` those of ``Y``.
    ``target_bidegrees`` records components that land in a bidegree other
    than ``(q, p)``, so maps that break the grading stay representable.
    """

    field: Field
    left_dims: tuple
    right_dims: tuple
    components: dict
    kind: str = ALGEBRA_TWIST
    inverses: dict | None = None
    target_bidegrees: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.left_dims = tuple(self.left_dims)
        self.right_dims = tuple(self.right_dims)
        L, R = self.left_dims, self.right_dims
        for (p, q), m in self.components.items():
            tq, tp = self.target_bidegrees.get((p, q), (q, p))
            want = (R[tq] * L[tp], L[p] * R[q])
            if m.shape != want:
                raise KoszulError(f"component ({p},{q}) has shape {m.shape}, expected {want}")
        if self.inverses is not None:
            for (p, q), m in self.inverses.items():
                if m.shape != (L[p] * R[q], R[q] * L[p]):
                    raise KoszulError(f"inverse component ({p},{q}) has shape {m.shape}")

    @property
    def max_degree(self) -> int:
        return max(p + q for p, q in self.components)

    def component(self, p: int, q: int) -> Matrix:
        try:
            return self.components[(p, q)]
        except KeyError:
            raise KoszulError(f"component ({p},{q}) beyond the truncation") from None

    def inverse(self, p: int, q: int) -> Matrix:
        if self.inverses is not None and (p, q) in self.inverses:
            return self.inverses[(p, q)]
        return self.component(p, q).inverse()

    def respects_grading(self) -> bool:
        return all(self.target_bidegrees.get(k, (k[1], k[0])) == (k[1], k[0])
                   for k in self.components)

    def is_invertible(self) -> bool:
        return self.respects_grading() and all(m.is_invertible() for m in self.components.values())

    def with_inverses(self) -> "TwistingMap":
        """Copy with every component inverse computed; raises if one is singular."""
        inv = {}
        for k, m in self.components.items():
            if not m.is_invertible():
                raise TwistingError(f"component {k} of the {self.kind} is not invertible")
            inv[k] = m.inverse()
        return type(self)(self.field, self.left_dims, self.right_dims, dict(self.components),
                          self.kind, inv, dict(self.target_bidegrees))


class EntwiningMap(TwistingMap):
    """Components ``lambda^{p,q}: C^p (x) B^q -> B^q (x) C^p``."""

    def __init__(self, field, left_dims, right_dims, components, kind=ENTWINING, inverses=None,
                 target_bidegrees=None):
        super().__init__(field, left_dims, right_dims, components, ENTWINING, inverses,
                         target_bidegrees or {})


def ladder(alpha: Matrix, nx: int, ny: int, p: int, q: int) -> Matrix:
    """Lift ``alpha: X (x) Y -> Y (x) X`` to ``X^(x)p (x) Y^(x)q -> Y^(x)q (x) X^(x)p``."""
    f = alpha.field
    if p == 0 or q == 0:
        return _eye(f, nx ** p * ny ** q)
    row = _eye(f, nx * ny ** q)
    for k in range(q):
        row = kron_all(_eye(f, ny ** k), alpha, _eye(f, ny ** (q - 1 - k))) @ row
    out = _eye(f, nx ** p * ny ** q)
    for k in range(1, p + 1):
        out = kron_all(_eye(f, nx ** (p - k)), row, _eye(f, nx ** (k - 1))) @ out
    return out


def flip_twist(left: GradedAlgebra | GradedCoring, right: GradedAlgebra | GradedCoring,
               N: int, kind: str = ALGEBRA_TWIST) -> TwistingMap:
    """The plain flip ``x (x) y -> y (x) x``; ``left`` is the first tensor factor."""
    from .linalg import swap_matrix
    f = left.field
    comps = {(p, n - p): swap_matrix(f, left.dims[p], right.dims[n - p])
             for n in range(N + 1) for p in range(n + 1)}
    cls = EntwiningMap if kind == ENTWINING else TwistingMap
    tw = cls(f, left.dims[:N + 1], right.dims[:N + 1], comps, kind)
    return tw.with_inverses()


# algebra twists

def _format_vector(p: QuadraticPresentation, vec: list, degree: int) -> dict:
    return {p.word(i, degree): p.field.format(v) for i, v in enumerate(vec) if v != 0}


def _descent_gate(pA: QuadraticPresentation, pB: QuadraticPresentation, s11: Matrix):
    f = pA.field
    nA, nB = pA.n_gen, pB.n_gen
    WA, WB = pA.relations.basis, pB.relations.basis
    # b (x) w  for w in W_A must land in W_A (x) V_B
    img = ladder(s11, nB, nA, 1, 2) @ kronecker(_eye(f, nB), WA)
    target = Subspace.span(kronecker(WA, _eye(f, nB)))
    for col in range(img.ncols):
        if not target.contains(img.select_columns([col])):
            b, w = divmod(col, WA.ncols)
            rel = _format_vector(pA, WA.column(w), 2)
            raise DescentError(
                f"not a twisting map for these relations: sigma({pB.generators[b]} (x) r) "
                f"leaves W_A (x) V_B for the relation r = {rel} of A")
    # w (x) a  for w in W_B must land in V_A (x) W_B
    img = ladder(s11, nB, nA, 2, 1) @ kronecker(WB, _eye(f, nA))
    target = Subspace.span(kronecker(_eye(f, nA), WB))
    for col in range(img.ncols):
        if not target.contains(img.select_columns([col])):
            w, a = divmod(col, nA)
            rel = _format_vector(pB, WB.column(w), 2)
            raise DescentError(
                f"not a twisting map for these relations: sigma(r (x) {pA.generators[a]}) "
                f"leaves V_A (x) W_B for the relation r = {rel} of B")


def extend_sigma(pA: QuadraticPresentation, pB: QuadraticPresentation, s11: Matrix, N: int,
                 algebras: tuple | None = None) -> TwistingMap:
    """Extend ``s11: V_B (x) V_A -> V_A (x) V_B`` to a graded twisting map of the
    quadratic algebras, after checking that it preserves both relation spaces."""
    f = pA.field
    nA, nB = pA.n_gen, pB.n_gen
    if s11.shape != (nA * nB, nB * nA):
        raise KoszulError(f"sigma^(1,1) must be {nA * nB}x{nB * nA}, got {s11.shape}")
    _descent_gate(pA, pB, s11)
    A, B = algebras if algebras is not None else (build_algebra(pA, N), build_algebra(pB, N))
    comps = {}
    for n in range(N + 1):
        for p in range(n + 1):
            q = n - p
            alpha = ladder(s11, nB, nA, p, q)
            proj = kronecker(A.projections[q], B.projections[p])
            sec = kronecker(B.sections[p], A.sections[q])
            sig = proj @ alpha @ sec
            # well-defined on the quotients: sigma (pi_B (x) pi_A) == (pi_A (x) pi_B) alpha
            if sig @ kronecker(B.projections[p], A.projections[q]) != proj @ alpha:
                raise ConsistencyError(f"sigma^({p},{q}) does not descend to the quotients")
            comps[(p, q)] = sig
    tw = TwistingMap(f, B.dims, A.dims, comps, ALGEBRA_TWIST)
    if tw.is_invertible():
        tw = tw.with_inverses()
    return tw


def twist_axiom_failures(s: TwistingMap, algebras, N: int | None = None) -> list[str]:
    """Violated conditions of ``sigma: B (x) A -> A (x) B``; ``algebras = (A, B)``."""
    A, B = algebras
    f = A.field
    N = s.max_degree if N is None else N
    out = []
    if not s.respects_grading():
        bad = [k for k in s.components if s.target_bidegrees.get(k, (k[1], k[0])) != (k[1], k[0])]
        return [f"grading: component {bad[0]} lands in bidegree {s.target_bidegrees[bad[0]]}"]
    for n in range(N + 1):
        if s.component(0, n) != _eye(f, A.dims[n]):
            out.append(f"unit: sigma(1 (x) a) != a (x) 1 in degree {n}")
        if s.component(n, 0) != _eye(f, B.dims[n]):
            out.append(f"unit: sigma(b (x) 1) != 1 (x) b in degree {n}")
    eye = lambda n: _eye(f, n)
    for p in range(N + 1):
        for q in range(N + 1 - p):
            for r in range(N + 1 - p - q):
                # twist1: sigma (B (x) m_A) = (m_A (x) B)(A (x) sigma)(sigma (x) A)
                lhs = s.component(p, q + r) @ kronecker(eye(B.dims[p]), A.m(q, r))
                rhs = (kronecker(A.m(q, r), eye(B.dims[p]))
                       @ kronecker(eye(A.dims[q]), s.component(p, r))
                       @ kronecker(s.component(p, q), eye(A.dims[r])))
                if lhs != rhs:
                    out.append(f"twist1 fails on B^{p} (x) A^{q} (x) A^{r}")
                # twist2: sigma (m_B (x) A) = (A (x) m_B)(sigma (x) B)(B (x) sigma)
                lhs = s.component(p + r, q) @ kronecker(B.m(p, r), eye(A.dims[q]))
                rhs = (kronecker(eye(A.dims[q]), B.m(p, r))
                       @ kronecker(s.component(p, q), eye(B.dims[r]))
                       @ kronecker(eye(B.dims[p]), s.component(r, q)))
                if lhs != rhs:
                    out.append(f"twist2 fails on B^{p} (x) B^{r} (x) A^{q}")
    out.extend(_inverse_failures(s))
    return out


def _inverse_failures(s: TwistingMap) -> list[str]:
    out = []
    if s.inverses:
        for k, inv in s.inverses.items():
            m = s.components[k]
            if inv @ m != _eye(s.field, m.ncols) or m @ inv != _eye(s.field, m.nrows):
                out.append(f"inverse of component {k} is not a two-sided inverse")
    return out


def check_twist_axioms(s: TwistingMap, algebras, N: int | None = None) -> bool:
    return not twist_axiom_failures(s, algebras, N)


def _product_space(left_dims, right_dims, n: int) -> DirectSum:
    return DirectSum([((i, n - i), left_dims[i] * right_dims[n - i]) for i in range(n, -1, -1)])


def twisted_algebra(a: GradedAlgebra, b: GradedAlgebra, s: TwistingMap,
                    N: int | None = None) -> GradedAlgebra:
    """``A (x)_sigma B`` with ``(a (x) b)(a' (x) b') = a sigma(b (x) a') b'``."""
    N = min(a.max_degree, b.max_degree) if N is None else N
    fails = twist_axiom_failures(s, (a, b), N)
    if fails:
        raise TwistingError(f"not a twisting map: {fails[0]}")
    f = a.field
    spaces = [_product_space(a.dims, b.dims, n) for n in range(N + 1)]
    mult = {}
    for n in range(N + 1):
        for p in range(n + 1):
            q = n - p
            dom = TensorSum(spaces[p], spaces[q])
            blocks = []
            for (i, j) in spaces[p].keys:
                for (k, l) in spaces[q].keys:
                    mat = (kronecker(a.m(i, k), b.m(j, l))
                           @ kron_all(_eye(f, a.dims[i]), s.component(j, k), _eye(f, b.dims[l])))
                    blocks.append((((i + k, j + l), ((i, j), (k, l))), mat))
            mult[(p, q)] = block_matrix(f, spaces[n], dom, blocks)
    return GradedAlgebra(f, [sp.dim for sp in spaces], mult)


# coring twists

def hat_twist(t: TwistingMap) -> TwistingMap:
    """``(-1)^{pq} tau^{p,q}``."""
    sign = lambda p, q: -1 if (p * q) % 2 else 1
    comps = {(p, q): m.scale(sign(p, q)) for (p, q), m in t.components.items()}
    inv = None
    if t.inverses is not None:
        inv = {(p, q): m.scale(sign(p, q)) for (p, q), m in t.inverses.items()}
    return type(t)(t.field, t.left_dims, t.right_dims, comps, t.kind, inv,
                   dict(t.target_bidegrees))


def cotwist_axiom_failures(t: TwistingMap, corings, N: int | None = None) -> list[str]:
    """Violated conditions of ``tau: C (x) D -> D (x) C``; ``corings = (C, D)``."""
    C, D = corings
    f = C.field
    N = t.max_degree if N is None else N
    if not t.respects_grading():
        return ["grading: a component leaves its bidegree"]
    out = []
    eye = lambda n: _eye(f, n)
    for n in range(N + 1):
        if t.component(n, 0) != eye(C.dims[n]) or t.component(0, n) != eye(D.dims[n]):
            out.append(f"counit: tau is not the flip on degree {n} against degree 0")
    for p in range(N + 1):
        for q in range(N + 1 - p):
            for r in range(N + 1 - p - q):
                # cotwist1: (Delta_D (x) C) tau = (D (x) tau)(tau (x) D)(C (x) Delta_D)
                lhs = kronecker(D.delta(q, r), eye(C.dims[p])) @ t.component(p, q + r)
                rhs = (kronecker(eye(D.dims[q]), t.component(p, r))
                       @ kronecker(t.component(p, q), eye(D.dims[r]))
                       @ kronecker(eye(C.dims[p]), D.delta(q, r)))
                if lhs != rhs:
                    out.append(f"cotwist1 fails on C^{p} (x) D^{q + r} -> D^{q} (x) D^{r} (x) C^{p}")
                # cotwist2: (D (x) Delta_C) tau = (tau (x) C)(C (x) tau)(Delta_C (x) D)
                lhs = kronecker(eye(D.dims[q]), C.delta(p, r)) @ t.component(p + r, q)
                rhs = (kronecker(t.component(p, q), eye(C.dims[r]))
                       @ kronecker(eye(C.dims[p]), t.component(r, q))
                       @ kronecker(C.delta(p, r), eye(D.dims[q])))
                if lhs != rhs:
                    out.append(f"cotwist2 fails on C^{p + r} (x) D^{q} -> D^{q} (x) C^{p} (x) C^{r}")
    out.extend(_inverse_failures(t))
    return out


def check_cotwist_axioms(t: TwistingMap, corings, N: int | None = None) -> bool:
    return not cotwist_axiom_failures(t, corings, N)


def twisted_coring(c: GradedCoring, d: GradedCoring, t: TwistingMap,
                   N: int | None = None) -> GradedCoring:
    """``C (x)_t D`` with ``Delta = (C (x) t (x) D)(Delta_C (x) Delta_D)``."""
    N = min(c.max_degree, d.max_degree) if N is None else N
    fails = cotwist_axiom_failures(t, (c, d), N)
    if fails:
        raise TwistingError(f"not a twisting map of corings: {fails[0]}")
    f = c.field
    spaces = [_product_space(c.dims, d.dims, n) for n in range(N + 1)]
    comult = {}
    for n in range(N + 1):
        for p in range(n + 1):
            q = n - p
            cod = TensorSum(spaces[p], spaces[q])
            blocks = []
            for (i, j) in spaces[n].keys:
                for i1 in range(max(0, p - j), min(i, p) + 1):
                    j1 = p - i1
                    i2, j2 = i - i1, j - j1
                    mat = (kron_all(_eye(f, c.dims[i1]), t.component(i2, j1), _eye(f, d.dims[j2]))
                           @ kronecker(c.delta(i1, i2), d.delta(j1, j2)))
                    blocks.append(((((i1, j1), (i2, j2)), (i, j)), mat))
            comult[(p, q)] = block_matrix(f, cod, spaces[n], blocks)
    return GradedCoring(f, [sp.dim for sp in spaces], comult)


# entwining maps

def entwining_axiom_failures(l: TwistingMap, c: GradedCoring, b: GradedAlgebra,
                             N: int | None = None) -> list[str]:
    """Violated conditions of ``lambda: C (x) B -> B (x) C``."""
    f = c.field
    N = l.max_degree if N is None else N
    if not l.respects_grading():
        return ["grading: a component leaves its bidegree"]
    out = []
    eye = lambda n: _eye(f, n)
    for n in range(N + 1):
        if l.component(n, 0) != eye(c.dims[n]):
            out.append(f"unit: lambda(c (x) 1) != 1 (x) c in degree {n}")
        if l.component(0, n) != eye(b.dims[n]):
            out.append(f"counit: lambda is not the flip on C^0 (x) B^{n}")
    for p in range(N + 1):
        for q in range(N + 1 - p):
            for r in range(N + 1 - p - q):
                # entw1: lambda (C (x) m) = (m (x) C)(B (x) lambda)(lambda (x) B)
                lhs = l.component(p, q + r) @ kronecker(eye(c.dims[p]), b.m(q, r))
                rhs = (kronecker(b.m(q, r), eye(c.dims[p]))
                       @ kronecker(eye(b.dims[q]), l.component(p, r))
                       @ kronecker(l.component(p, q), eye(b.dims[r])))
                if lhs != rhs:
                    out.append(f"entw1 fails on C^{p} (x) B^{q} (x) B^{r}")
                # entw2: (B (x) Delta) lambda = (lambda (x) C)(C (x) lambda)(Delta (x) B)
                lhs = kronecker(eye(b.dims[q]), c.delta(p, r)) @ l.component(p + r, q)
                rhs = (kronecker(l.component(p, q), eye(c.dims[r]))
                       @ kronecker(eye(c.dims[p]), l.component(r, q))
                       @ kronecker(c.delta(p, r), eye(b.dims[q])))
                if lhs != rhs:
                    out.append(f"entw2 fails on C^{p + r} (x) B^{q}")
    out.extend(_inverse_failures(l))
    return out


def check_entwining_axioms(l: TwistingMap, c: GradedCoring, b: GradedAlgebra,
                           N: int | None = None) -> bool:
    return not entwining_axiom_failures(l, c, b, N)


# derived (tau, lambda)

def _restrict_to_duals(name: str, mat: Matrix, target_embedding: Matrix) -> Matrix:
    x = target_embedding.solve(mat)
    if x is None:
        raise TwistingError(f"sigma does not restrict to the duals: {name} leaves the coring")
    return x


def derive_tau_lambda(pairA: PreKoszulPair, pairB: PreKoszulPair, s: TwistingMap,
                      N: int | None = None) -> tuple[TwistingMap, EntwiningMap]:
    """``tau: C (x) D -> D (x) C`` and ``lambda: C (x) B -> B (x) C`` induced by ``sigma^{-1}``.

    On generators
    ``lambda^{1,1} = (B (x) theta_C)^{-1} (sigma^{1,1})^{-1} (theta_C (x) B)`` and
    ``tau^{1,1} = (theta_D (x) theta_C)^{-1} (sigma^{1,1})^{-1} (theta_C (x) theta_D)``;
    both are lifted by the ladder and restricted to ``C^p`` (through the
    iterated comultiplication) and, for ``lambda``, pushed down to ``B^q``.
    The results are checked against the compatibility conditions linking
    ``sigma``, ``tau``, ``lambda`` and ``theta``.
    """
    A, C, thC = pairA.algebra, pairA.coring, pairA.theta
    B, D, thD = pairB.algebra, pairB.coring, pairB.theta
    f = A.field
    N = min(pairA.max_degree, pairB.max_degree, s.max_degree) if N is None else N
    nA, nB = A.dims[1], B.dims[1]
    eye = lambda n: _eye(f, n)
    s11 = s.component(1, 1)
    if not s11.is_invertible():
        raise TwistingError("sigma^(1,1) is not invertible")
    s_inv = s11.inverse()
    lam11 = kronecker(eye(nB), thC.inverse()) @ s_inv @ kronecker(thC, eye(nB))
    tau11 = kronecker(thD.inverse(), thC.inverse()) @ s_inv @ kronecker(thC, thD)

    embC = [iterated_comultiplication(C, p) for p in range(N + 1)]
    embD = [iterated_comultiplication(D, q) for q in range(N + 1)]
    for name, emb, cor in (("C", embC, C), ("D", embD, D)):
        for p, e in enumerate(emb):
            if e.rank() != cor.dims[p]:
                raise TwistingError(f"{name} is not cogenerated in degree one (degree {p})")
    muB = [iterated_multiplication(B, q) for q in range(N + 1)]
    secB = []
    for q, mu in enumerate(muB):
        sec = mu.solve(eye(B.dims[q]))
        if sec is None:
            raise TwistingError(f"B is not generated in degree one (degree {q})")
        secB.append(sec)

    tau_c, lam_c = {}, {}
    for n in range(N + 1):
        for p in range(n + 1):
            q = n - p
            lad = ladder(tau11, nA, nB, p, q) @ kronecker(embC[p], embD[q])
            tau_c[(p, q)] = _restrict_to_duals(f"tau^({p},{q})", lad,
                                               kronecker(embD[q], embC[p]))
            y = (kronecker(muB[q], eye(nA ** p))
                 @ ladder(lam11, nA, nB, p, q) @ kronecker(embC[p], eye(nB ** q)))
            ker = kernel_basis(muB[q]).basis
            if not (y @ kronecker(eye(C.dims[p]), ker)).is_zero():
                raise TwistingError(
                    f"sigma does not restrict to the duals: lambda^({p},{q}) does not descend to B^{q}")
            z = _restrict_to_duals(f"lambda^({p},{q})", y, kronecker(eye(B.dims[q]), embC[p]))
            lam_c[(p, q)] = z @ kronecker(eye(C.dims[p]), secB[q])

    tau = TwistingMap(f, C.dims[:N + 1], D.dims[:N + 1], tau_c, CORING_TWIST)
    lam = EntwiningMap(f, C.dims[:N + 1], B.dims[:N + 1], lam_c)
    if not tau.is_invertible() or not lam.is_invertible():
        raise TwistingError("derived tau or lambda is not invertible")
    tau, lam = tau.with_inverses(), lam.with_inverses()

    s_full = s if s.inverses is not None else s.with_inverses()
    for p in range(1, N):
        # lambda^{p,1} (C^p (x) theta_D) = (theta_D (x) C^p) tau^{p,1}
        if (lam.component(p, 1) @ kronecker(eye(C.dims[p]), thD)
                != kronecker(thD, eye(C.dims[p])) @ tau.component(p, 1)):
            raise ConsistencyError(f"derived lambda and tau disagree on C^{p} (x) D^1")
    for q in range(1, N):
        # (sigma^{q,1})^{-1} (theta_C (x) B^q) = (B^q (x) theta_C) lambda^{1,q}
        if (s_full.inverse(q, 1) @ kronecker(thC, eye(B.dims[q]))
                != kronecker(eye(B.dims[q]), thC) @ lam.component(1, q)):
            raise ConsistencyError(f"derived lambda disagrees with sigma^-1 on C^1 (x) B^{q}")
    if N >= 2:
        # sigma^{1,1} (theta_D (x) theta_C) tau^{1,1} = theta_C (x) theta_D
        if s11 @ kronecker(thD, thC) @ tau.component(1, 1) != kronecker(thC, thD):
            raise ConsistencyError("theta, sigma and tau are incompatible on C^1 (x) D^1")
    return tau, lam


def twisted_pair(pairA: PreKoszulPair, pairB: PreKoszulPair, s: TwistingMap,
                 N: int | None = None, derived=None) -> PreKoszulPair:
    """``(A (x)_sigma B, C (x)_tau-hat D)`` with ``theta = theta_C (+) theta_D``."""
    N = min(pairA.max_degree, pairB.max_degree, s.max_degree) if N is None else N
    tau, lam = derived if derived is not None else derive_tau_lambda(pairA, pairB, s, N)
    A, C = pairA.algebra, pairA.coring
    B, D = pairB.algebra, pairB.coring
    f = A.field
    alg = twisted_algebra(A, B, s, N)
    cor = twisted_coring(C, D, hat_twist(tau), N)
    theta = Matrix.zeros(f, 0, 0)
    if N >= 1:
        dst = _product_space(A.dims, B.dims, 1)
        src = _product_space(C.dims, D.dims, 1)
        theta = block_matrix(f, dst, src, [(((1, 0), (1, 0)), pairA.theta),
                                           (((0, 1), (0, 1)), pairB.theta)])
    name = f"{pairA.name} (x)_sigma {pairB.name}" if pairA.name or pairB.name else ""
    meta = {"factors": (pairA, pairB), "sigma": s, "tau": tau, "lambda": lam,
            "coring_blocks": [_product_space(C.dims, D.dims, n) for n in range(N + 1)]}
    return PreKoszulPair(alg, cor, theta, name=name, meta=meta)


def prekoszul_by_summand(pair: PreKoszulPair) -> dict:
    """Pre-Koszul identity on each summand ``C^i (x) D^{2-i}`` of a twisted pair."""
    blocks = pair.meta.get("coring_blocks")
    if blocks is None:
        raise KoszulError("not a twisted pair")
    if pair.max_degree < 2:
        return {}
    comp = prekoszul_composite(pair)
    return {key: comp.select_columns(blocks[2].indices(key)).is_zero() for key in blocks[2].keys}


@dataclass
class FactorizationReport:
    """Does the left-module Koszul complex of the twisted pair split as a tensor product?"""

    max_degree: int
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def __bool__(self):
        return self.ok


def verify_factorization(pairA: PreKoszulPair, pairB: PreKoszulPair, s: TwistingMap,
                         N: int | None = None, twisted: PreKoszulPair | None = None
                         ) -> FactorizationReport:
    """Check ``delta_n = d' (x) Id + (-1)^p Id (x) d''`` slice by slice.

    ``delta_n`` is the differential of the twisted left-module complex
    conjugated by ``Id_A (x) lambda (x) Id_D``, which identifies
    ``A^i (x) C^p (x) B^j (x) D^q`` with ``A^i (x) B^j (x) C^p (x) D^q``.
    Failures are reported as ``(n, m, (target block, source block))``.
    """
    N = min(pairA.max_degree, pairB.max_degree, s.max_degree) if N is None else N
    tw = twisted or twisted_pair(pairA, pairB, s, N)
    lam = tw.meta["lambda"]
    A, C = pairA.algebra, pairA.coring
    B, D = pairB.algebra, pairB.coring
    f = A.field
    eye = lambda n: _eye(f, n)
    mapsA, mapsB = KoszulMaps(pairA), KoszulMaps(pairB)
    report = FactorizationReport(N)
    for m in range(N + 1):
        K = build_slice(tw, ComplexFlavor.LEFT_MODULE, m, augmented=False)
        tens, phi, phi_inv, twspace = [], [], [], []
        for n in range(m + 1):
            keys = [((i, p, m - n - i, n - p),
                     A.dims[i] * C.dims[p] * B.dims[m - n - i] * D.dims[n - p])
                    for p in range(n, -1, -1) for i in range(m - n, -1, -1)]
            T = DirectSum(keys)
            S = TensorSum(_product_space(A.dims, B.dims, m - n), _product_space(C.dims, D.dims, n))
            fwd, bwd = [], []
            for (i, p, j, q) in T.keys:
                swap = kron_all(eye(A.dims[i]), lam.component(p, j), eye(D.dims[q]))
                back = kron_all(eye(A.dims[i]), lam.inverse(p, j), eye(D.dims[q]))
                fwd.append(((((i, j), (p, q)), (i, p, j, q)), swap))
                bwd.append((((i, p, j, q), ((i, j), (p, q))), back))
            tens.append(T)
            twspace.append(S)
            phi.append(block_matrix(f, S, T, fwd))
            phi_inv.append(block_matrix(f, T, S, bwd))
        for n in range(1, m + 1):
            delta = phi_inv[n - 1] @ K.differentials[n - 1] @ phi[n]
            src, dst = tens[n], tens[n - 1]
            expected = []
            for (i, p, j, q) in src.keys:
                if p >= 1:
                    expected.append((((i + 1, p - 1, j, q), (i, p, j, q)),
                                     kronecker(mapsA.right(i, p), eye(B.dims[j] * D.dims[q]))))
                if q >= 1:
                    expected.append((((i, p, j + 1, q - 1), (i, p, j, q)),
                                     kronecker(eye(A.dims[i] * C.dims[p]),
                                               mapsB.right(j, q)).scale((-1) ** p)))
            want = block_matrix(f, dst, src, expected)
            if delta != want:
                for sk in src.keys:
                    for dk in dst.keys:
                        if (extract_block(delta, dst, src, dk, sk)
                                != extract_block(want, dst, src, dk, sk)):
                            report.failures.append((n, m, (dk, sk)))
    return report


# matrix families

class TwistingMatrixFamily:
    """An ``n x n`` matrix of graded endomorphisms, truncated at ``max_degree``.

    ``entries[i][j][d]`` is the matrix of the ``(i, j)`` endomorphism on the
    degree-``d`` component of the target.  ``role`` is ``sigma`` (target an
    algebra ``A``, twisting ``T(V) (x) A -> A (x) T(V)``), ``tau`` (target a
    coring ``C``, twisting ``C (x) (k + V) -> (k + V) (x) C``) or ``lambda``
    (target a coring ``C``, entwining ``C (x) T(V) -> T(V) (x) C``).
    """

    ROLES = ("sigma", "tau", "lambda")

    def __init__(self, field: Field, n: int, entries, role: str = "sigma"):
        if role not in self.ROLES:
            raise ValueError(f"role must be one of {self.ROLES}")
        self.field, self.n, self.role = field, n, role
        self.entries = [[list(entries[i][j]) for j in range(n)] for i in range(n)]
        self.max_degree = len(self.entries[0][0]) - 1 if n else 0

    def entry(self, i: int, j: int, d: int) -> Matrix:
        return self.entries[i][j][d]

    @classmethod
    def from_function(cls, field: Field, n: int, dims, fn, role: str = "sigma"):
        """``fn(i, j, d)`` returns the matrix (or a scalar multiple of identity)."""
        entries = []
        for i in range(n):
            row = []
            for j in range(n):
                mats = []
                for d, dim in enumerate(dims):
                    v = fn(i, j, d)
                    mats.append(v if isinstance(v, Matrix) else _eye(field, dim).scale(v))
                row.append(mats)
            entries.append(row)
        return cls(field, n, entries, role)

    @classmethod
    def identity(cls, field: Field, n: int, dims, role: str = "sigma"):
        return cls.from_function(field, n, dims, lambda i, j, d: 1 if i == j else 0, role)

    @classmethod
    def scaling(cls, field: Field, dims, q, role: str = "sigma"):
        """``n = 1`` family multiplying degree ``d`` by ``q^d``."""
        qq = field.element(q)
        return cls.from_function(field, 1, dims, lambda i, j, d: qq ** d if d else 1, role)

    def _block(self, d: int, transpose: bool) -> Matrix:
        n = self.n
        dim = self.entries[0][0][d].nrows if n else 0
        rows = DirectSum([(r, dim) for r in range(n)])
        blocks = []
        for r in range(n):
            for c in range(n):
                e = self.entries[c][r][d] if transpose else self.entries[r][c][d]
                blocks.append(((r, c), e))
        return block_matrix(self.field, rows, rows, blocks)

    def inverse_family(self) -> "TwistingMatrixFamily | None":
        """Inverse in the truncated endomorphism algebra, or None.

        For ``sigma`` the transposed matrix is inverted (equivalently the
        matrix is inverted over the opposite endomorphism algebra); for
        ``tau`` and ``lambda`` the matrix itself.
        """
        n, transpose = self.n, self.role == "sigma"
        inv = [[[None] * (self.max_degree + 1) for _ in range(n)] for _ in range(n)]
        for d in range(self.max_degree + 1):
            M = self._block(d, transpose)
            if not M.is_invertible():
                return None
            Mi = M.inverse()
            dim = M.nrows // n if n else 0
            for r in range(n):
                for c in range(n):
                    blk = Mi.select_rows(range(r * dim, (r + 1) * dim)).select_columns(
                        range(c * dim, (c + 1) * dim))
                    if transpose:
                        inv[c][r][d] = blk
                    else:
                        inv[r][c][d] = blk
        return TwistingMatrixFamily(self.field, n, inv, self.role)


def family_violations(fam: TwistingMatrixFamily, target, N: int | None = None) -> list:
    """``(i, j, degree, condition)`` for every violated defining identity."""
    f, n = fam.field, fam.n
    N = min(fam.max_degree, target.max_degree) if N is None else N
    out = []
    for i in range(n):
        for j in range(n):
            want = _eye(f, 1) if i == j else Matrix.zeros(f, 1, 1)
            if fam.entry(i, j, 0) != want:
                out.append((i, j, 0, "sigma2" if fam.role == "sigma" else fam.role + "3"))
    for total in range(N + 1):
        for p in range(total + 1):
            q = total - p
            for i in range(n):
                for j in range(n):
                    if fam.role == "sigma":
                        mult = target.m(p, q)
                        lhs = fam.entry(i, j, total) @ mult
                        rhs = Matrix.zeros(f, lhs.nrows, lhs.ncols)
                        for k in range(n):
                            rhs = rhs + mult @ kronecker(fam.entry(i, k, p), fam.entry(k, j, q))
                        cond = "sigma1"
                    else:
                        dl = target.delta(p, q)
                        lhs = dl @ fam.entry(i, j, total)
                        rhs = Matrix.zeros(f, lhs.nrows, lhs.ncols)
                        for k in range(n):
                            rhs = rhs + kronecker(fam.entry(i, k, p), fam.entry(k, j, q)) @ dl
                        cond = fam.role + "2"
                    if lhs != rhs:
                        out.append((i, j, total, cond))
    return out


def check_family_conditions(fam: TwistingMatrixFamily, target, N: int | None = None) -> bool:
    return not family_violations(fam, target, N)


def matrix_twisting_build(target, fam: TwistingMatrixFamily, N: int | None = None):
    """Assemble the twisting (or entwining) map encoded by a matrix family.

    * ``sigma``: ``T(V) (x) A -> A (x) T(V)``,
      ``e_i (x) a -> sum_j sigma_ij(a) (x) e_j``.
    * ``tau``: ``C (x) (k + V) -> (k + V) (x) C``,
      ``c (x) e_i -> sum_j e_j (x) tau_ji(c)``.
    * ``lambda``: ``C (x) T(V) -> T(V) (x) C``,
      ``c (x) e_i -> sum_j e_j (x) lambda_ji(c)``.

    Inverses are attached when the family is invertible.
    """
    N = min(fam.max_degree, target.max_degree) if N is None else N
    viol = family_violations(fam, target, N)
    if viol:
        i, j, d, cond = viol[0]
        raise TwistingError(f"matrix family violates {cond} at (i, j) = ({i}, {j}), degree {d}")
    f, n = fam.field, fam.n
    dims = target.dims[:N + 1]
    inv_fam = fam.inverse_family()
    eye = lambda k: _eye(f, k)

    def one_step(q: int, inverse: bool) -> Matrix:
        """Degree-one generator against degree ``q`` of the target."""
        e = inv_fam if inverse else fam
        dim = dims[q]
        entries = []
        for i in range(n):
            for j in range(n):
                blk = e.entry(i, j, q)
                for r, c, v in blk.nonzero_entries():
                    if fam.role == "sigma" and not inverse:
                        # col (i, a) -> row (a', j), value sigma_ij[a', a]
                        entries.append((r * n + j, i * dim + c, v))
                    elif fam.role == "sigma":
                        # sigma'(a (x) e_i) = sum_j e_j (x) sigma'_ij(a): col (a, i) -> row (j, a')
                        entries.append((j * dim + r, c * n + i, v))
                    elif not inverse:
                        # col (c, i) -> row (j, c'), value x_ji[c', c]
                        entries.append((i * dim + r, c * n + j, v))
                    else:
                        # x'(e_i (x) c) = sum_j x'_ji(c) (x) e_j: col (i, c) -> row (c', j)
                        entries.append((r * n + i, j * dim + c, v))
        return Matrix.from_entries(f, n * dim, n * dim, entries)

    comps, invs = {}, {} if inv_fam is not None else None
    if fam.role == "sigma":
        for total in range(N + 1):
            for p in range(total + 1):
                q = total - p
                if p == 0:
                    comps[(0, q)] = eye(dims[q])
                else:
                    comps[(p, q)] = (kronecker(one_step(q, False), eye(n ** (p - 1)))
                                     @ kronecker(eye(n), comps[(p - 1, q)]))
                if invs is not None:
                    if p == 0:
                        invs[(0, q)] = eye(dims[q])
                    else:
                        invs[(p, q)] = (kronecker(eye(n), invs[(p - 1, q)])
                                        @ kronecker(one_step(q, True), eye(n ** (p - 1))))
        return TwistingMap(f, tuple(n ** p for p in range(N + 1)), dims, comps,
                           ALGEBRA_TWIST, invs)
    if fam.role == "tau":
        d_dims = tuple([1, n] + [0] * (N - 1))[:N + 1]
        for total in range(N + 1):
            for r in range(total + 1):
                q = total - r
                if q == 0:
                    comps[(r, 0)] = eye(dims[r])
                elif q == 1:
                    comps[(r, 1)] = one_step(r, False)
                else:
                    comps[(r, q)] = Matrix.zeros(f, 0, 0)
                if invs is not None:
                    if q == 0:
                        invs[(r, 0)] = eye(dims[r])
                    elif q == 1:
                        invs[(r, 1)] = one_step(r, True)
                    else:
                        invs[(r, q)] = Matrix.zeros(f, 0, 0)
        return TwistingMap(f, dims, d_dims, comps, CORING_TWIST, invs)
    for total in range(N + 1):
        for r in range(total + 1):
            p = total - r
            if p == 0:
                comps[(r, 0)] = eye(dims[r])
            else:
                comps[(r, p)] = (kronecker(eye(n), comps[(r, p - 1)])
                                 @ kronecker(one_step(r, False), eye(n ** (p - 1))))
            if invs is not None:
                if p == 0:
                    invs[(r, 0)] = eye(dims[r])
                else:
                    invs[(r, p)] = (kronecker(one_step(r, True), eye(n ** (p - 1)))
                                    @ kronecker(eye(n), invs[(r, p - 1)]))
    return EntwiningMap(f, dims, tuple(n ** p for p in range(N + 1)), comps, inverses=invs)


def check_siglamb(sig: TwistingMatrixFamily, lam: TwistingMatrixFamily, a1_dim: int) -> bool:
    """``sum_j sigma_ji lambda_jk = sum_j lambda_ij sigma_kj = delta_ik Id`` on degree one."""
    if sig.n != lam.n:
        raise ValueError("families of different sizes")
    f, n = sig.field, sig.n
    eye, zero = _eye(f, a1_dim), Matrix.zeros(f, a1_dim, a1_dim)
    for i in range(n):
        for k in range(n):
            want = eye if i == k else zero
            first = zero
            second = zero
            for j in range(n):
                first = first + sig.entry(j, i, 1) @ lam.entry(j, k, 1)
                second = second + lam.entry(i, j, 1) @ sig.entry(k, j, 1)
            if first != want or second != want:
                return False
    return True
