"""Finite complexes of matrices and their homology."""
from __future__ import annotations

from dataclasses import dataclass

from .exceptions import ComplexError, DimensionMismatchError
from .linalg import Field

__all__ = ["FiniteComplex", "homology_dims", "is_exact", "euler_characteristic"]

CHAIN = "chain"
COCHAIN = "cochain"


@dataclass(frozen=True, eq=False)
class FiniteComplex:
    """Components at consecutive degrees ``start, start+1, ...``.

    For a cochain complex ``differentials[i]`` maps position ``i`` to
    position ``i + 1``; for a chain complex it maps position ``i + 1`` to
    position ``i``.  ``labels`` optionally names the components.
    """

    field: Field
    component_dims: tuple
    differentials: tuple
    direction: str = COCHAIN
    start: int = 0
    labels: tuple | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.component_dims)
        diffs = tuple(self.differentials)
        object.__setattr__(self, "component_dims", dims)
        object.__setattr__(self, "differentials", diffs)
        if self.direction not in (CHAIN, COCHAIN):
            raise ValueError(f"direction must be 'chain' or 'cochain', got {self.direction!r}")
        if len(diffs) != max(len(dims) - 1, 0):
            raise DimensionMismatchError(
                f"{len(dims)} components need {max(len(dims) - 1, 0)} differentials, got {len(diffs)}")
        for i, d in enumerate(diffs):
            if self.direction == COCHAIN:
                want = (dims[i + 1], dims[i])
            else:
                want = (dims[i], dims[i + 1])
            if d.shape != want:
                raise DimensionMismatchError(
                    f"differential {i} has shape {d.shape}, expected {want}")

    @property
    def degrees(self) -> list[int]:
        return [self.start + i for i in range(len(self.component_dims))]

    def square_defects(self) -> list[int]:
        """Positions ``i`` where the composite of differentials ``i`` and ``i+1`` is nonzero."""
        bad = []
        for i in range(len(self.differentials) - 1):
            a, b = self.differentials[i], self.differentials[i + 1]
            comp = b @ a if self.direction == COCHAIN else a @ b
            if not comp.is_zero():
                bad.append(i)
        return bad

    def check(self) -> None:
        bad = self.square_defects()
        if bad:
            i = bad[0]
            deg = self.start + (i if self.direction == COCHAIN else i + 2)
            raise ComplexError(f"d o d != 0 starting at degree {deg}")

    def ranks(self) -> list[int]:
        return [d.rank() for d in self.differentials]


def homology_dims(c: FiniteComplex) -> list[int]:
    """Dimensions of (co)homology at each position, by rank-nullity."""
    c.check()
    ranks = c.ranks()
    n = len(c.component_dims)
    out = []
    for i in range(n):
        if c.direction == COCHAIN:
            outgoing = ranks[i] if i < n - 1 else 0
            incoming = ranks[i - 1] if i > 0 else 0
        else:
            outgoing = ranks[i - 1] if i > 0 else 0
            incoming = ranks[i] if i < n - 1 else 0
        out.append(c.component_dims[i] - outgoing - incoming)
    return out


def is_exact(c: FiniteComplex) -> bool:
    return all(h == 0 for h in homology_dims(c))


def euler_characteristic(c: FiniteComplex) -> int:
    return sum((-1) ** (c.start + i) * d for i, d in enumerate(c.component_dims))
