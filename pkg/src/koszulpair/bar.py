"""Normalized bar and cobar complexes, Tor/Ext tables, and the comparison maps.

Slice ``m`` of the bar complex of ``A`` has, in homological degree ``n``,
the direct sum over compositions ``(m_1, ..., m_n)`` of ``m`` (all parts
positive, lexicographic order) of ``A^{m_1} (x) ... (x) A^{m_n}``.  The
cobar complex of ``C`` is laid out the same way.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .complexes import CHAIN, COCHAIN, FiniteComplex, homology_dims
from .exceptions import KoszulError
from .graded import (GradedAlgebra, GradedCoring, PreKoszulPair, check_prekoszul,
                     iterated_comultiplication, iterated_multiplication)
from .koszul import KoszulMaps
from .linalg import DirectSum, Matrix, block_matrix, kron_all, kronecker, kernel_basis

__all__ = [
    "BidegreeTable", "ChainMapReport", "compositions", "bar_complex", "cobar_complex",
    "tor_table", "ext_table", "phi_chain_map", "psi_chain_map", "tor_truncated_pair",
]


@lru_cache(maxsize=None)
def compositions(m: int, n: int) -> tuple:
    """Compositions of ``m`` into ``n`` positive parts, lexicographic."""
    if n == 0:
        return ((),) if m == 0 else ()
    out = []
    for first in range(1, m - n + 2):
        for rest in compositions(m - first, n - 1):
            out.append((first,) + rest)
    return tuple(out)


def _eye(f, n):
    return Matrix.identity(f, n)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _space(dim_of, comps) -> DirectSum:
    return DirectSum([(c, _prod(dim_of(k) for k in c)) for c in comps])


def _merge(a: GradedAlgebra, comp: tuple, j: int) -> tuple[tuple, Matrix]:
    """Multiply factors ``j`` and ``j+1`` of the block ``comp``."""
    f = a.field
    before = _prod(a.dim(k) for k in comp[:j])
    after = _prod(a.dim(k) for k in comp[j + 2:])
    mat = kron_all(_eye(f, before), a.m(comp[j], comp[j + 1]), _eye(f, after))
    return comp[:j] + (comp[j] + comp[j + 1],) + comp[j + 2:], mat


def _split(c: GradedCoring, comp: tuple, j: int, r: int) -> tuple[tuple, Matrix]:
    """Comultiply factor ``j`` of ``comp`` into degrees ``(r, comp[j] - r)``."""
    f = c.field
    before = _prod(c.dim(k) for k in comp[:j])
    after = _prod(c.dim(k) for k in comp[j + 1:])
    mat = kron_all(_eye(f, before), c.delta(r, comp[j] - r), _eye(f, after))
    return comp[:j] + (r, comp[j] - r) + comp[j + 1:], mat


def _check_degree(obj, m):
    if not 0 <= m <= obj.max_degree:
        raise KoszulError(f"internal degree {m} outside 0..{obj.max_degree}")


def bar_complex(a: GradedAlgebra, m: int) -> FiniteComplex:
    """Slice ``m`` of the normalized bar complex, positions ``n = 0..m``.

    ``d_n = sum_{i=1}^{n-1} (-1)^i (... (x) m (x) ...)`` merging factors ``i, i+1``.
    """
    _check_degree(a, m)
    f = a.field
    spaces = [_space(a.dim, compositions(m, n)) for n in range(m + 1)]
    diffs = []
    for n in range(1, m + 1):
        src, dst = spaces[n], spaces[n - 1]
        blocks = []
        if n >= 2:
            for comp in src.keys:
                for i in range(1, n):
                    tgt, mat = _merge(a, comp, i - 1)
                    blocks.append(((tgt, comp), mat.scale((-1) ** i)))
        diffs.append(block_matrix(f, dst, src, blocks))
    return FiniteComplex(f, [s.dim for s in spaces], diffs, CHAIN, start=0,
                         labels=tuple(f"Abar^(x){n}" for n in range(m + 1)))


def cobar_complex(c: GradedCoring, m: int) -> FiniteComplex:
    """Slice ``m`` of the normalized cobar complex, positions ``n = 0..m``.

    ``d^n = sum_{i=1}^{n} (-1)^{i-1} (... (x) Delta_bar (x) ...)`` on factor ``i``.
    """
    _check_degree(c, m)
    f = c.field
    spaces = [_space(c.dim, compositions(m, n)) for n in range(m + 1)]
    diffs = []
    for n in range(m):
        src, dst = spaces[n], spaces[n + 1]
        blocks = []
        for comp in src.keys:
            for i in range(1, n + 1):
                for r in range(1, comp[i - 1]):
                    tgt, mat = _split(c, comp, i - 1, r)
                    blocks.append(((tgt, comp), mat.scale((-1) ** (i - 1))))
        diffs.append(block_matrix(f, dst, src, blocks))
    return FiniteComplex(f, [s.dim for s in spaces], diffs, COCHAIN, start=0,
                         labels=tuple(f"Cbar^(x){n}" for n in range(m + 1)))


@dataclass
class BidegreeTable:
    """Dimensions indexed by (homological degree n, internal degree m), ``n <= m <= N``."""

    max_degree: int
    entries: dict

    def get(self, n: int, m: int) -> int:
        return self.entries.get((n, m), 0)

    def diagonal(self) -> list[int]:
        return [self.get(n, n) for n in range(self.max_degree + 1)]

    def off_diagonal(self) -> dict:
        return {k: v for k, v in self.entries.items() if k[0] != k[1]}

    def off_diagonal_vanishes(self) -> bool:
        return all(v == 0 for v in self.off_diagonal().values())

    def first_off_diagonal(self):
        """Smallest internal degree carrying off-diagonal classes, or None."""
        bad = sorted((m, n) for (n, m), v in self.entries.items() if n != m and v)
        return (bad[0][1], bad[0][0]) if bad else None


def tor_table(a: GradedAlgebra, N: int | None = None) -> BidegreeTable:
    N = a.max_degree if N is None else N
    entries = {}
    for m in range(N + 1):
        h = homology_dims(bar_complex(a, m))
        for n, d in enumerate(h):
            entries[(n, m)] = d
    return BidegreeTable(N, entries)


def ext_table(c: GradedCoring, N: int | None = None) -> BidegreeTable:
    N = c.max_degree if N is None else N
    entries = {}
    for m in range(N + 1):
        h = homology_dims(cobar_complex(c, m))
        for n, d in enumerate(h):
            entries[(n, m)] = d
    return BidegreeTable(N, entries)


@dataclass
class ChainMapReport:
    """Outcome of verifying a comparison map slice by slice.

    ``violations`` lists the ``(n, m)`` where the chain-map identity fails;
    ``induced`` maps ``(n, m)`` to whether the induced map on (co)homology is
    an isomorphism there.
    """

    name: str
    max_degree: int
    prekoszul: bool
    violations: list = dc_field(default_factory=list)
    induced: dict = dc_field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return not self.violations

    @property
    def first_violation(self):
        return min(self.violations, key=lambda nm: (nm[1], nm[0])) if self.violations else None

    @property
    def all_isomorphisms(self) -> bool:
        return all(self.induced.values())

    @property
    def ok(self) -> bool:
        return self.verified and self.all_isomorphisms


def _tensor_power(m: Matrix, n: int) -> Matrix:
    out = _eye(m.field, 1)
    for _ in range(n):
        out = kronecker(out, m)
    return out


def _iso_into_homology(phi: Matrix, d_out: Matrix | None, d_in: Matrix | None) -> bool:
    """Is ``phi: S -> X_n`` (S with zero differential) an iso ``S -> H_n(X)``?

    ``d_out`` leaves position n, ``d_in`` arrives at it (None when absent).
    """
    f, dim_x, dim_s = phi.field, phi.nrows, phi.ncols
    if d_out is not None and not (d_out @ phi).is_zero():
        return False
    bnd = d_in if d_in is not None else Matrix.zeros(f, dim_x, 0)
    rank_b = bnd.rank()
    z = dim_x - (d_out.rank() if d_out is not None else 0)
    if z - rank_b != dim_s:
        return False
    return bnd.hstack(phi).rank() - rank_b == dim_s


def _iso_from_cohomology(lam: Matrix, d_out: Matrix | None, d_in: Matrix | None) -> bool:
    """Is ``lam: X^n -> S`` (S with zero differential) an iso ``H^n(X) -> S``?"""
    f, dim_s, dim_x = lam.field, lam.nrows, lam.ncols
    if d_in is not None and not (lam @ d_in).is_zero():
        return False
    rank_b = d_in.rank() if d_in is not None else 0
    if d_out is None:
        cocycles = _eye(f, dim_x)
    else:
        cocycles = kernel_basis(d_out).basis
    if cocycles.ncols - rank_b != dim_s:
        return False
    return (lam @ cocycles).rank() == dim_s


def _left_bar_resolution(a: GradedAlgebra, m: int):
    """Slice ``m`` of ``A (x) Abar^(x)n`` with ``delta_n = sum_{j=0}^{n-1} (-1)^j`` merges."""
    f = a.field
    spaces = []
    for n in range(m + 1):
        comps = [(m0,) + rest for m0 in range(m, -1, -1) for rest in compositions(m - m0, n)]
        # lexicographic on the full tuple
        comps.sort()
        spaces.append(_space(a.dim, comps))
    diffs = []
    for n in range(1, m + 1):
        src, dst = spaces[n], spaces[n - 1]
        blocks = []
        for comp in src.keys:
            for j in range(n):
                tgt, mat = _merge(a, comp, j)
                blocks.append(((tgt, comp), mat.scale((-1) ** j)))
        diffs.append(block_matrix(f, dst, src, blocks))
    return spaces, diffs


def phi_chain_map(pair: PreKoszulPair, N: int | None = None) -> ChainMapReport:
    """Verify ``phi_n = Id (x) theta^(x)n Delta(n)`` from the left-module Koszul
    complex to the left bar resolution, and that ``C^n -> Tor_n(A)`` is an iso."""
    N = pair.max_degree if N is None else N
    a, c, f = pair.algebra, pair.coring, pair.field
    report = ChainMapReport("phi", N, check_prekoszul(pair))
    maps = KoszulMaps(pair)
    theta_n = [_tensor_power(pair.theta, n) @ iterated_comultiplication(c, n)
               for n in range(N + 1)]
    for m in range(N + 1):
        spaces, deltas = _left_bar_resolution(a, m)
        phis = []
        for n in range(m + 1):
            src = DirectSum([("K", a.dim(m - n) * c.dim(n))])
            key = (m - n,) + (1,) * n
            blk = kronecker(_eye(f, a.dim(m - n)), theta_n[n])
            phis.append(block_matrix(f, spaces[n], src, [((key, "K"), blk)]))
        for n in range(1, m + 1):
            d_n = maps.right(m - n, n)
            if phis[n - 1] @ d_n != deltas[n - 1] @ phis[n]:
                report.violations.append((n, m))
    for m in range(N + 1):
        bar = bar_complex(a, m)
        for n in range(m + 1):
            if n == m:
                phi = theta_n[n] if n > 0 else _eye(f, 1)
            else:
                phi = Matrix.zeros(f, bar.component_dims[n], 0)
            d_out = bar.differentials[n - 1] if n >= 1 else None
            d_in = bar.differentials[n] if n < m else None
            report.induced[(n, m)] = _iso_into_homology(phi, d_out, d_in)
    return report


def _right_cobar_resolution(c: GradedCoring, m: int):
    """Slice ``m`` of ``Cbar^(x)n (x) C``.

    ``delta^n = sum_{i=1}^{n} (-1)^{i-1} Delta_bar on factor i
    + (-1)^n (split of the last factor with left part of positive degree)``.
    """
    f = c.field
    spaces = []
    for n in range(m + 1):
        comps = sorted(rest + (last,) for last in range(m + 1)
                       for rest in compositions(m - last, n))
        spaces.append(_space(c.dim, comps))
    diffs = []
    for n in range(m):
        src, dst = spaces[n], spaces[n + 1]
        blocks = []
        for comp in src.keys:
            for i in range(1, n + 1):
                for r in range(1, comp[i - 1]):
                    tgt, mat = _split(c, comp, i - 1, r)
                    blocks.append(((tgt, comp), mat.scale((-1) ** (i - 1))))
            for r in range(1, comp[n] + 1):
                tgt, mat = _split(c, comp, n, r)
                blocks.append(((tgt, comp), mat.scale((-1) ** n)))
        diffs.append(block_matrix(f, dst, src, blocks))
    return spaces, diffs


def psi_chain_map(pair: PreKoszulPair, N: int | None = None) -> ChainMapReport:
    """Verify ``psi^n = (mu_n theta^(x)n) (x) Id`` from the right cobar resolution to
    the right-comodule Koszul complex with signs ``(-1)^n d_r``, and that the
    induced ``Ext^n(C) -> A^n`` is an iso."""
    N = pair.max_degree if N is None else N
    a, c, f = pair.algebra, pair.coring, pair.field
    report = ChainMapReport("psi", N, check_prekoszul(pair))
    maps = KoszulMaps(pair)
    mu_n = [iterated_multiplication(a, n) @ _tensor_power(pair.theta, n)
            for n in range(N + 1)]
    for m in range(N + 1):
        spaces, deltas = _right_cobar_resolution(c, m)
        psis = []
        for n in range(m + 1):
            dst = DirectSum([("K", a.dim(n) * c.dim(m - n))])
            key = (1,) * n + (m - n,)
            blk = kronecker(mu_n[n], _eye(f, c.dim(m - n)))
            psis.append(block_matrix(f, dst, spaces[n], [(("K", key), blk)]))
        for n in range(m):
            d_r = maps.right(n, m - n).scale((-1) ** n)
            if psis[n + 1] @ deltas[n] != d_r @ psis[n]:
                report.violations.append((n, m))
    for m in range(N + 1):
        cob = cobar_complex(c, m)
        for n in range(m + 1):
            if n == m:
                lam = mu_n[n] if n > 0 else _eye(f, 1)
            else:
                lam = Matrix.zeros(f, 0, cob.component_dims[n])
            d_out = cob.differentials[n] if n < m else None
            d_in = cob.differentials[n - 1] if n >= 1 else None
            report.induced[(n, m)] = _iso_from_cohomology(lam, d_out, d_in)
    return report


def tor_truncated_pair(a: GradedAlgebra) -> PreKoszulPair:
    """``A`` in degrees <= 2 paired with ``Tor`` in degrees <= 2.

    For an algebra generated in degree one, ``Tor_1 = A^1`` and ``Tor_2`` in
    internal degree 2 is ``ker m^{1,1}``; the comultiplication ``Tor_2 ->
    Tor_1 (x) Tor_1`` is the inclusion of that kernel.
    """
    if a.max_degree < 2:
        raise KoszulError("need the algebra up to degree 2")
    f = a.field
    a2 = a.truncate(2)
    ker = kernel_basis(a2.m(1, 1)).basis
    n1 = a2.dims[1]
    coring = GradedCoring(f, [1, n1, ker.ncols], {(1, 1): ker})
    return PreKoszulPair(a2, coring, _eye(f, n1))
