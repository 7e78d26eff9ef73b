"""The six Koszul complexes of a pre-Koszul pair, sliced by internal degree.

Slice ``m`` of each complex is a finite complex of matrices:

===============  =========  ============================================
flavor           direction  component at position n
===============  =========  ============================================
left-comodule    cochain    C^{m-n} (x) A^n
right-comodule   cochain    A^n (x) C^{m-n}
bicomodule       cochain    sum over i+k = m-n of C^i (x) A^n (x) C^k
left-module      chain      A^{m-n} (x) C^n
right-module     chain      C^n (x) A^{m-n}
bimodule         chain      sum over i+k = m-n of A^i (x) C^n (x) A^k
===============  =========  ============================================

Augmented slices put the (co)augmentation at position -1.  For the
one-sided flavors it is ``k`` in slice 0 and zero in every other slice.
For the two-sided flavors it is ``C^m`` (resp. ``A^m``), mapped by the
comultiplication (resp. multiplication).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from functools import lru_cache

from .complexes import CHAIN, COCHAIN, FiniteComplex, homology_dims
from .exceptions import KoszulError, PreKoszulError
from .graded import PreKoszulPair, check_prekoszul, prekoszul_composite
from .linalg import DirectSum, Matrix, block_matrix, kronecker

__all__ = [
    "ComplexFlavor", "KoszulVerdict", "build_slice", "koszul_verdict",
    "theorem_equivalence_check", "slice_exactness", "KoszulMaps",
]


class ComplexFlavor(Enum):
    LEFT_COMODULE = "left-comodule"
    RIGHT_COMODULE = "right-comodule"
    BICOMODULE = "bicomodule"
    LEFT_MODULE = "left-module"
    RIGHT_MODULE = "right-module"
    BIMODULE = "bimodule"

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @property
    def direction(self) -> str:
        return COCHAIN if self in _COCHAIN_FLAVORS else CHAIN


_SYMBOLS = {
    ComplexFlavor.LEFT_COMODULE: "K_l^*",
    ComplexFlavor.RIGHT_COMODULE: "K_r^*",
    ComplexFlavor.BICOMODULE: "K^*",
    ComplexFlavor.LEFT_MODULE: "K_*^l",
    ComplexFlavor.RIGHT_MODULE: "K_*^r",
    ComplexFlavor.BIMODULE: "K_*",
}
_COCHAIN_FLAVORS = {ComplexFlavor.LEFT_COMODULE, ComplexFlavor.RIGHT_COMODULE,
                    ComplexFlavor.BICOMODULE}


class KoszulMaps:
    """The one-sided Koszul differentials of a pair, memoized.

    ``left(p, n)``:  C^p (x) A^n -> C^{p-1} (x) A^{n+1},
    ``c (x) a -> c_(1) (x) theta(c_(2)) a``.

    ``right(n, p)``: A^n (x) C^p -> A^{n+1} (x) C^{p-1},
    ``a (x) c -> a theta(c_(1)) (x) c_(2)``.
    """

    def __init__(self, pair: PreKoszulPair):
        self.pair = pair
        self.field = pair.field
        self.A = pair.algebra
        self.C = pair.coring
        self.left = lru_cache(maxsize=None)(self._left)
        self.right = lru_cache(maxsize=None)(self._right)

    def eye(self, n: int) -> Matrix:
        return Matrix.identity(self.field, n)

    def _left(self, p: int, n: int) -> Matrix:
        A, C, th = self.A, self.C, self.pair.theta
        act = A.m(1, n) @ kronecker(th, self.eye(A.dim(n)))
        return kronecker(self.eye(C.dim(p - 1)), act) @ kronecker(C.delta(p - 1, 1),
                                                                   self.eye(A.dim(n)))

    def _right(self, n: int, p: int) -> Matrix:
        A, C, th = self.A, self.C, self.pair.theta
        act = A.m(n, 1) @ kronecker(self.eye(A.dim(n)), th)
        return kronecker(act, self.eye(C.dim(p - 1))) @ kronecker(self.eye(A.dim(n)),
                                                                  C.delta(1, p - 1))


def _refuse_unless_prekoszul(pair: PreKoszulPair):
    if not check_prekoszul(pair):
        comp = prekoszul_composite(pair)
        raise PreKoszulError(
            "pair is not pre-Koszul: m^{1,1}(theta x theta)Delta^{1,1}: C^2 -> A^2 has rank "
            f"{comp.rank()}, so d o d != 0 at the corner C^2 -> A^2 of every Koszul complex")


def build_slice(pair: PreKoszulPair, flavor: ComplexFlavor, m: int, augmented: bool = True,
                maps: KoszulMaps | None = None) -> FiniteComplex:
    """Internal-degree slice ``m`` of one of the six Koszul complexes.

    Refuses pairs that are not pre-Koszul and verifies d o d = 0 on the result.
    """
    flavor = ComplexFlavor(flavor)
    if not 0 <= m <= pair.max_degree:
        raise KoszulError(f"internal degree {m} outside 0..{pair.max_degree}")
    _refuse_unless_prekoszul(pair)
    maps = maps or KoszulMaps(pair)
    builder = _BUILDERS[flavor]
    dims, diffs, labels = builder(maps, m, augmented)
    cx = FiniteComplex(pair.field, dims, diffs, flavor.direction,
                       start=-1 if augmented else 0, labels=tuple(labels))
    cx.check()
    return cx


def _tensor_label(*parts):
    return "(x)".join(f"{s}^{d}" for s, d in parts)


def _one_sided(maps: KoszulMaps, m: int, augmented: bool, flavor: ComplexFlavor):
    A, C, f = maps.A, maps.C, maps.field
    dims, diffs, labels = [], [], []
    if flavor is ComplexFlavor.LEFT_COMODULE:
        for n in range(m + 1):
            dims.append(C.dim(m - n) * A.dim(n))
            labels.append(_tensor_label(("C", m - n), ("A", n)))
        diffs = [maps.left(m - n, n) for n in range(m)]
    elif flavor is ComplexFlavor.RIGHT_COMODULE:
        for n in range(m + 1):
            dims.append(A.dim(n) * C.dim(m - n))
            labels.append(_tensor_label(("A", n), ("C", m - n)))
        diffs = [maps.right(n, m - n) for n in range(m)]
    elif flavor is ComplexFlavor.RIGHT_MODULE:
        for n in range(m + 1):
            dims.append(C.dim(n) * A.dim(m - n))
            labels.append(_tensor_label(("C", n), ("A", m - n)))
        # differentials[i]: position i+1 -> i
        diffs = [maps.left(i + 1, m - i - 1) for i in range(m)]
    else:
        for n in range(m + 1):
            dims.append(A.dim(m - n) * C.dim(n))
            labels.append(_tensor_label(("A", m - n), ("C", n)))
        diffs = [maps.right(m - i - 1, i + 1) for i in range(m)]
    if augmented:
        unit = 1 if m == 0 else 0
        if flavor.direction == COCHAIN:
            aug = Matrix.identity(f, 1) if m == 0 else Matrix.zeros(f, dims[0], 0)
        else:
            aug = Matrix.identity(f, 1) if m == 0 else Matrix.zeros(f, 0, dims[0])
        dims = [unit] + dims
        diffs = [aug] + diffs
        labels = ["k" if m == 0 else "0"] + labels
    return dims, diffs, labels


def _two_sided_space(maps: KoszulMaps, m: int, n: int, comodule: bool) -> DirectSum:
    A, C = maps.A, maps.C
    blocks = []
    for i in range(m - n + 1):
        k = m - n - i
        if comodule:
            blocks.append(((i, k), C.dim(i) * A.dim(n) * C.dim(k)))
        else:
            blocks.append(((i, k), A.dim(i) * C.dim(n) * A.dim(k)))
    return DirectSum(blocks)


def _bicomodule(maps: KoszulMaps, m: int, augmented: bool):
    C, f = maps.C, maps.field
    eye = maps.eye
    spaces = [_two_sided_space(maps, m, n, True) for n in range(m + 1)]
    diffs = []
    for n in range(m):
        src, dst = spaces[n], spaces[n + 1]
        blocks = []
        sign = -1 if (n + 1) % 2 else 1
        for (i, k) in src.keys:
            if i >= 1:
                blocks.append((((i - 1, k), (i, k)), kronecker(maps.left(i, n), eye(C.dim(k)))))
            if k >= 1:
                blocks.append((((i, k - 1), (i, k)),
                               kronecker(eye(C.dim(i)), maps.right(n, k)).scale(sign)))
        diffs.append(block_matrix(f, dst, src, blocks))
    dims = [s.dim for s in spaces]
    labels = [" + ".join(_tensor_label(("C", i), ("A", n), ("C", k)) for (i, k) in s.keys)
              for n, s in enumerate(spaces)]
    if augmented:
        src = DirectSum([("top", C.dim(m))])
        blocks = [(((i, k), "top"), C.delta(i, k)) for (i, k) in spaces[0].keys]
        diffs = [block_matrix(f, spaces[0], src, blocks)] + diffs
        dims = [C.dim(m)] + dims
        labels = [f"C^{m}"] + labels
    return dims, diffs, labels


def _bimodule(maps: KoszulMaps, m: int, augmented: bool):
    A, f = maps.A, maps.field
    eye = maps.eye
    spaces = [_two_sided_space(maps, m, n, False) for n in range(m + 1)]
    diffs = []
    # differentials[n-1]: position n -> n-1
    for n in range(1, m + 1):
        src, dst = spaces[n], spaces[n - 1]
        sign = -1 if n % 2 else 1
        blocks = []
        for (i, k) in src.keys:
            blocks.append((((i + 1, k), (i, k)), kronecker(maps.right(i, n), eye(A.dim(k)))))
            blocks.append((((i, k + 1), (i, k)),
                           kronecker(eye(A.dim(i)), maps.left(n, k)).scale(sign)))
        diffs.append(block_matrix(f, dst, src, blocks))
    dims = [s.dim for s in spaces]
    labels = [" + ".join(_tensor_label(("A", i), ("C", n), ("A", k)) for (i, k) in s.keys)
              for n, s in enumerate(spaces)]
    if augmented:
        dst = DirectSum([("top", A.dim(m))])
        blocks = [(("top", (i, k)), A.m(i, k)) for (i, k) in spaces[0].keys]
        diffs = [block_matrix(f, dst, spaces[0], blocks)] + diffs
        dims = [A.dim(m)] + dims
        labels = [f"A^{m}"] + labels
    return dims, diffs, labels


_BUILDERS = {
    ComplexFlavor.LEFT_COMODULE: lambda mp, m, a: _one_sided(mp, m, a, ComplexFlavor.LEFT_COMODULE),
    ComplexFlavor.RIGHT_COMODULE: lambda mp, m, a: _one_sided(mp, m, a, ComplexFlavor.RIGHT_COMODULE),
    ComplexFlavor.LEFT_MODULE: lambda mp, m, a: _one_sided(mp, m, a, ComplexFlavor.LEFT_MODULE),
    ComplexFlavor.RIGHT_MODULE: lambda mp, m, a: _one_sided(mp, m, a, ComplexFlavor.RIGHT_MODULE),
    ComplexFlavor.BICOMODULE: _bicomodule,
    ComplexFlavor.BIMODULE: _bimodule,
}


@dataclass
class KoszulVerdict:
    """Per-flavor, per-degree exactness of the augmented slices up to ``max_internal_degree``."""

    max_internal_degree: int
    table: dict
    homology: dict = dc_field(default_factory=dict)

    @property
    def koszul(self) -> bool:
        return all(all(row) for row in self.table.values())

    @property
    def witness_degree(self) -> int | None:
        """Smallest internal degree where some flavor is not exact."""
        for m in range(self.max_internal_degree + 1):
            if not all(row[m] for row in self.table.values()):
                return m
        return None

    @property
    def koszul_up_to(self) -> int | None:
        return self.max_internal_degree if self.koszul else None

    def agreement(self) -> list[bool]:
        """For each ``m``: do all six flavors agree on exactness?"""
        return [len({row[m] for row in self.table.values()}) == 1
                for m in range(self.max_internal_degree + 1)]

    def failing_flavors(self, m: int) -> list[ComplexFlavor]:
        return [fl for fl, row in self.table.items() if not row[m]]


def slice_exactness(pair: PreKoszulPair, flavor: ComplexFlavor, m: int,
                    maps: KoszulMaps | None = None) -> tuple[bool, list[int]]:
    h = homology_dims(build_slice(pair, flavor, m, augmented=True, maps=maps))
    return all(x == 0 for x in h), h


def koszul_verdict(pair: PreKoszulPair, N: int | None = None) -> KoszulVerdict:
    """Exactness of all six augmented complexes in internal degrees ``0..N``."""
    N = pair.max_degree if N is None else N
    if N > pair.max_degree:
        raise KoszulError(f"N = {N} exceeds the pair's truncation {pair.max_degree}")
    _refuse_unless_prekoszul(pair)
    maps = KoszulMaps(pair)
    table, homology = {}, {}
    for fl in ComplexFlavor:
        row = []
        for m in range(N + 1):
            ok, h = slice_exactness(pair, fl, m, maps)
            row.append(ok)
            if not ok:
                homology[(fl, m)] = h
        table[fl] = tuple(row)
    return KoszulVerdict(N, table, homology)


def theorem_equivalence_check(pair: PreKoszulPair, N: int | None = None,
                              verdict: KoszulVerdict | None = None) -> bool:
    """Six-way agreement per degree plus the left-comodule / right-module reflection."""
    N = pair.max_degree if N is None else N
    verdict = verdict or koszul_verdict(pair, N)
    if not all(verdict.agreement()):
        return False
    maps = KoszulMaps(pair)
    for m in range(N + 1):
        left = build_slice(pair, ComplexFlavor.LEFT_COMODULE, m, augmented=False, maps=maps)
        right = build_slice(pair, ComplexFlavor.RIGHT_MODULE, m, augmented=False, maps=maps)
        if list(left.component_dims) != list(reversed(right.component_dims)):
            return False
        if homology_dims(left) != list(reversed(homology_dims(right))):
            return False
    return True
