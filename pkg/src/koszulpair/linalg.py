"""Exact linear algebra over the rationals and prime fields.

Matrices wrap python-flint (``fmpq_mat`` / ``nmod_mat``).  Vectors are
columns.  Tensor products use the Kronecker convention: the basis of
``U (x) V`` is ordered lexicographically with the left factor most
significant, so ``u_i (x) v_j`` sits at index ``i * dim V + j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import re

import flint

from .exceptions import DimensionMismatchError, FieldMismatchError, KoszulError

__all__ = [
    "Field", "Matrix", "Subspace", "DirectSum",
    "rank", "kernel_basis", "subspace_intersect", "subspace_sum",
    "quotient_map", "quotient_section", "kronecker", "kron_all", "block_matrix",
    "TensorSum", "extract_block", "tensor_block_embedding", "permutation_matrix", "swap_matrix",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field GF(p)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"GF({self.p}) is not a field: {self.p} is not prime")

    @classmethod
    def rational(cls) -> "Field":
        return cls(None)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(int(p))

    @classmethod
    def parse(cls, spec: str) -> "Field":
        """Accepts ``rational``, ``Q``, ``QQ``, ``gf5``, ``GF(5)``."""
        s = str(spec).strip().lower()
        if s in ("rational", "q", "qq", "rationals"):
            return cls.rational()
        m = re.fullmatch(r"gf\(?(\d+)\)?", s)
        if m:
            return cls.gf(int(m.group(1)))
        raise ValueError(f"unknown field {spec!r}; expected 'rational' or 'gfP'")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def name(self) -> str:
        return "rational" if self.p is None else f"gf{self.p}"

    def element(self, x):
        """Coerce ``x`` (int, Fraction, "p/q" string, flint scalar) into the field.

        Returns a Fraction over Q and an int in ``range(p)`` over GF(p).
        """
        if isinstance(x, str):
            m = _FRACTION_RE.match(x)
            if not m:
                raise ValueError(f"cannot parse coefficient {x!r}")
            num = int(m.group(1))
            den = int(m.group(2)) if m.group(2) else 1
            x = Fraction(num, den)
        elif isinstance(x, flint.fmpq):
            x = Fraction(int(x.p), int(x.q))
        elif isinstance(x, flint.nmod):
            x = int(x)
        elif isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            x = Fraction(x)
        if not isinstance(x, Fraction):
            raise TypeError(f"unsupported scalar type {type(x).__name__}")
        if self.p is None:
            return x
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
        return (x.numerator * pow(x.denominator, -1, self.p)) % self.p

    def format(self, x) -> str:
        """Serialize a scalar: ``"p/q"`` (or ``"n"``) over Q, ``"k"`` over GF(p)."""
        x = self.element(x)
        if self.p is not None:
            return str(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def _flint_entry(self, x):
        x = self.element(x)
        if self.p is not None:
            return x
        if x.denominator == 1:
            return x.numerator
        return flint.fmpq(x.numerator, x.denominator)

    def _new(self, nrows: int, ncols: int, flat=None):
        if self.p is None:
            if flat is None:
                return flint.fmpq_mat(nrows, ncols)
            return flint.fmpq_mat(nrows, ncols, flat)
        if flat is None:
            return flint.nmod_mat(nrows, ncols, self.p)
        return flint.nmod_mat(nrows, ncols, flat, self.p)

    def __str__(self):
        return "Q" if self.p is None else f"GF({self.p})"


def _py(field: Field, e):
    if field.p is None:
        return Fraction(int(e.p), int(e.q))
    return int(e)


class Matrix:
    """An immutable matrix over a :class:`Field`."""

    __slots__ = ("field", "_m")

    def __init__(self, field: Field, raw):
        self.field = field
        self._m = raw

    # construction
    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, field._new(nrows, ncols))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        flat = [0] * (n * n)
        for i in range(n):
            flat[i * n + i] = 1
        return cls(field, field._new(n, n, flat))

    @classmethod
    def from_rows(cls, field: Field, rows, ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise DimensionMismatchError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatchError("ragged rows")
        flat = [field._flint_entry(x) for r in rows for x in r]
        return cls(field, field._new(len(rows), ncols, flat))

    @classmethod
    def from_columns(cls, field: Field, cols, nrows: int | None = None) -> "Matrix":
        cols = [list(c) for c in cols]
        if nrows is None:
            if not cols:
                raise DimensionMismatchError("nrows is required for a matrix with no columns")
            nrows = len(cols[0])
        return cls.from_rows(field, cols, nrows).T if cols else cls.zeros(field, nrows, 0)

    @classmethod
    def from_entries(cls, field: Field, nrows: int, ncols: int, entries) -> "Matrix":
        """Build from ``{(i, j): value}`` or an iterable of ``(i, j, value)``; repeats add."""
        if isinstance(entries, dict):
            entries = ((i, j, v) for (i, j), v in entries.items())
        acc: dict[int, Fraction | int] = {}
        for i, j, v in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise DimensionMismatchError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            k = i * ncols + j
            acc[k] = acc.get(k, 0) + field.element(v)
        flat = [0] * (nrows * ncols)
        for k, v in acc.items():
            flat[k] = field._flint_entry(v)
        return cls(field, field._new(nrows, ncols, flat))

    # shape and access
    @property
    def nrows(self) -> int:
        return self._m.nrows()

    @property
    def ncols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return (self._m.nrows(), self._m.ncols())

    def __getitem__(self, ij):
        i, j = ij
        return _py(self.field, self._m[i, j])

    def rows(self) -> list[list]:
        nc = self.ncols
        flat = [_py(self.field, e) for e in self._m.entries()]
        return [flat[r * nc:(r + 1) * nc] for r in range(self.nrows)]

    def column(self, j: int) -> list:
        return [self[i, j] for i in range(self.nrows)]

    def nonzero_entries(self):
        """List of ``(i, j, value)`` for the nonzero entries."""
        nc = self.ncols
        out = []
        f = self.field
        for k, e in enumerate(self._m.entries()):
            if e != 0:
                out.append((k // nc, k % nc, _py(f, e)))
        return out

    def is_zero(self) -> bool:
        return all(e == 0 for e in self._m.entries())

    # arithmetic
    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatchError(f"cannot compose {self.shape} with {other.shape}")
        if self.ncols == 0:
            return Matrix.zeros(self.field, self.nrows, other.ncols)
        return Matrix(self.field, self._m * other._m)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.field, self._m + other._m)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix(self.field, self._m - other._m)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, -self._m)

    def scale(self, c) -> "Matrix":
        c = self.field._flint_entry(c)
        if self.nrows == 0 or self.ncols == 0:
            return self
        if self.field.p is None:
            return Matrix(self.field, self._m * flint.fmpq(c))
        return Matrix(self.field, self._m * flint.nmod(c, self.field.p))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and (self.nrows == 0 or self.ncols == 0 or self._m == other._m))

    __hash__ = None

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self._m.transpose())

    def select_rows(self, idx) -> "Matrix":
        idx = list(idx)
        nc = self.ncols
        flat = self._m.entries()
        out = []
        for i in idx:
            out.extend(flat[i * nc:(i + 1) * nc])
        if self.field.p is not None:
            out = [int(e) for e in out]
        return Matrix(self.field, self.field._new(len(idx), nc, out))

    def select_columns(self, idx) -> "Matrix":
        return self.T.select_rows(idx).T

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.nrows != other.nrows:
            raise DimensionMismatchError("hstack needs equal row counts")
        return self.T.vstack(other.T).T

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.ncols:
            raise DimensionMismatchError("vstack needs equal column counts")
        flat = list(self._m.entries()) + list(other._m.entries())
        if self.field.p is not None:
            flat = [int(e) for e in flat]
        return Matrix(self.field, self.field._new(self.nrows + other.nrows, self.ncols, flat))

    # linear algebra
    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        return self._m.rank()

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        if self.nrows == 0 or self.ncols == 0:
            return self, []
        r, rk = self._m.rref()
        red = Matrix(self.field, r)
        pivots = []
        nc = self.ncols
        flat = r.entries()
        for k in range(rk):
            row = flat[k * nc:(k + 1) * nc]
            for j, e in enumerate(row):
                if e != 0:
                    pivots.append(j)
                    break
        return red, pivots

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise DimensionMismatchError(f"cannot invert a {self.shape} matrix")
        if self.nrows == 0:
            return self
        try:
            return Matrix(self.field, self._m.inv())
        except ZeroDivisionError:
            raise KoszulError("matrix is singular") from None

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """Some ``X`` with ``self @ X == rhs``, or ``None`` if inconsistent."""
        self._check(rhs)
        if self.nrows != rhs.nrows:
            raise DimensionMismatchError(f"solve: {self.shape} vs rhs {rhs.shape}")
        n, k = self.ncols, rhs.ncols
        if k == 0:
            return Matrix.zeros(self.field, n, 0)
        if self.nrows == 0:
            return Matrix.zeros(self.field, n, k)
        red, pivots = self.hstack(rhs).rref()
        if pivots and pivots[-1] >= n:
            return None
        entries = []
        for row, pc in enumerate(pivots):
            for j in range(k):
                v = red[row, n + j]
                if v != 0:
                    entries.append((pc, j, v))
        return Matrix.from_entries(self.field, n, k, entries)

    def kron(self, other: "Matrix") -> "Matrix":
        return kronecker(self, other)

    def __repr__(self):
        return f"Matrix({self.field}, {self.rows()!r})"


def rank(m: Matrix) -> int:
    return m.rank()


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product, left factor most significant."""
    a._check(b)
    r, c = a.nrows * b.nrows, a.ncols * b.ncols
    br, bc = b.nrows, b.ncols
    ea, eb = a.nonzero_entries(), b.nonzero_entries()
    f = a.field
    flat = [0] * (r * c)
    if f.p is None:
        for i, j, x in ea:
            base_r, base_c = i * br, j * bc
            for k, l, y in eb:
                v = x * y
                flat[(base_r + k) * c + base_c + l] = (
                    v.numerator if v.denominator == 1 else flint.fmpq(v.numerator, v.denominator))
    else:
        p = f.p
        for i, j, x in ea:
            base_r, base_c = i * br, j * bc
            for k, l, y in eb:
                flat[(base_r + k) * c + base_c + l] = (x * y) % p
    return Matrix(f, f._new(r, c, flat))


def kron_all(*mats: Matrix) -> Matrix:
    out = mats[0]
    for m in mats[1:]:
        out = kronecker(out, m)
    return out


class Subspace:
    """A subspace of ``k^n`` stored by its canonical basis.

    The basis columns are the nonzero rows of the reduced row echelon
    form of any spanning set, so two subspaces are equal iff their
    bases are equal.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Matrix, pivots: list[int]):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, vectors: Matrix) -> "Subspace":
        """Column span of ``vectors``."""
        n = vectors.nrows
        red, pivots = vectors.T.rref()
        rows = red.select_rows(range(len(pivots))) if pivots else Matrix.zeros(vectors.field, 0, n)
        return cls(n, rows.T, pivots)

    @classmethod
    def zero(cls, field: Field, n: int) -> "Subspace":
        return cls(n, Matrix.zeros(field, n, 0), [])

    @classmethod
    def full(cls, field: Field, n: int) -> "Subspace":
        return cls(n, Matrix.identity(field, n), list(range(n)))

    @property
    def field(self) -> Field:
        return self.basis.field

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def contains(self, vectors: Matrix) -> bool:
        return self.coordinates(vectors) is not None

    def coordinates(self, vectors: Matrix) -> Matrix | None:
        """Coordinates of ``vectors`` in the canonical basis, or None if outside."""
        if vectors.nrows != self.ambient_dim:
            raise DimensionMismatchError(
                f"vectors of length {vectors.nrows} in ambient dimension {self.ambient_dim}")
        # the canonical basis restricted to its pivot rows is the identity
        coords = vectors.select_rows(self.pivots)
        if self.basis @ coords != vectors:
            return None
        return coords

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(m: Matrix) -> Subspace:
    """The null space of ``m`` as a subspace of ``k^ncols``."""
    n = m.ncols
    red, pivots = m.rref()
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    entries = []
    for col, fj in enumerate(free):
        entries.append((fj, col, 1))
        for row, pc in enumerate(pivots):
            v = red[row, fj]
            if v != 0:
                entries.append((pc, col, -v))
    vecs = Matrix.from_entries(m.field, n, len(free), entries)
    return Subspace.span(vecs)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError("subspaces live in different ambient spaces")
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    return Subspace.span(a.basis.hstack(b.basis))


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError("subspaces live in different ambient spaces")
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.field, a.ambient_dim)
    # x = A u = B v  <=>  (u, v) in ker [A | -B]
    ker = kernel_basis(a.basis.hstack(-b.basis))
    u = ker.basis.select_rows(range(a.dim))
    return Subspace.span(a.basis @ u)


def quotient_map(ambient_dim: int, sub: Subspace) -> Matrix:
    """Projection ``k^n -> k^n / sub`` in the basis of non-pivot coordinates.

    The section is the inclusion of those coordinates, so
    ``quotient_map(...) @ section == identity``.
    """
    if sub.ambient_dim != ambient_dim:
        raise DimensionMismatchError(f"subspace of k^{sub.ambient_dim} in k^{ambient_dim}")
    field = sub.field
    pivset = set(sub.pivots)
    nonpiv = [j for j in range(ambient_dim) if j not in pivset]
    index = {j: k for k, j in enumerate(nonpiv)}
    entries = [(index[j], j, 1) for j in nonpiv]
    # row k of the canonical basis is e_{pivot_k} + sum_j R[k, j] e_j over non-pivots j,
    # so e_{pivot_k} == -sum_j R[k, j] e_j in the quotient
    rows = sub.basis.T
    for i, j, v in rows.nonzero_entries():
        if j in index:
            entries.append((index[j], sub.pivots[i], -v))
    return Matrix.from_entries(field, len(nonpiv), ambient_dim, entries)


def quotient_section(ambient_dim: int, sub: Subspace) -> Matrix:
    """Inclusion of the non-pivot coordinates, a right inverse of :func:`quotient_map`."""
    pivset = set(sub.pivots)
    nonpiv = [j for j in range(ambient_dim) if j not in pivset]
    return Matrix.from_entries(sub.field, ambient_dim, len(nonpiv),
                               [(j, k, 1) for k, j in enumerate(nonpiv)])


class DirectSum:
    """Ordered direct sum of labelled blocks, used to assemble block matrices."""

    def __init__(self, blocks):
        self.keys = []
        self._dims = {}
        self._offsets = {}
        off = 0
        for key, d in blocks:
            if key in self._dims:
                raise ValueError(f"duplicate block {key!r}")
            self.keys.append(key)
            self._dims[key] = d
            self._offsets[key] = off
            off += d
        self.dim = off

    def dim_of(self, key) -> int:
        return self._dims[key]

    def offset(self, key) -> int:
        return self._offsets[key]

    def __contains__(self, key):
        return key in self._dims

    def indices(self, key):
        o = self._offsets[key]
        return range(o, o + self._dims[key])

    def inclusion(self, field: Field, key) -> Matrix:
        d, o = self._dims[key], self._offsets[key]
        return Matrix.from_entries(field, self.dim, d, [(o + i, i, 1) for i in range(d)])

    def projection(self, field: Field, key) -> Matrix:
        return self.inclusion(field, key).T

    def __repr__(self):
        return f"DirectSum({[(k, self._dims[k]) for k in self.keys]})"


class TensorSum:
    """``S_1 (x) ... (x) S_k`` for direct sums ``S_i``; blocks are tuples of keys.

    Blocks of a tensor product of direct sums are not contiguous in the
    Kronecker order, so :meth:`indices` lists their positions explicitly.
    """

    def __init__(self, *factors: DirectSum):
        self.factors = factors
        self.dim = 1
        for fac in factors:
            self.dim *= fac.dim
        self.keys = [()]
        for fac in factors:
            self.keys = [k + (x,) for k in self.keys for x in fac.keys]

    def dim_of(self, key) -> int:
        out = 1
        for fac, k in zip(self.factors, key):
            out *= fac.dim_of(k)
        return out

    def indices(self, key):
        idx = [0]
        for fac, k in zip(self.factors, key):
            o, d, n = fac.offset(k), fac.dim_of(k), fac.dim
            idx = [i * n + o + x for i in idx for x in range(d)]
        return idx


def block_matrix(field: Field, codomain, domain, blocks) -> Matrix:
    """Assemble ``{(row_key, col_key): Matrix}`` into one matrix; repeated keys add.

    ``codomain`` and ``domain`` are :class:`DirectSum` or :class:`TensorSum`.
    """
    if isinstance(blocks, dict):
        blocks = blocks.items()
    entries = []
    for (rk, ck), m in blocks:
        if m.shape != (codomain.dim_of(rk), domain.dim_of(ck)):
            raise DimensionMismatchError(
                f"block {rk!r}<-{ck!r} has shape {m.shape}, expected "
                f"{(codomain.dim_of(rk), domain.dim_of(ck))}")
        ri, ci = codomain.indices(rk), domain.indices(ck)
        entries.extend((ri[i], ci[j], v) for i, j, v in m.nonzero_entries())
    return Matrix.from_entries(field, codomain.dim, domain.dim, entries)


def extract_block(m: Matrix, codomain, domain, row_key, col_key) -> Matrix:
    """The ``(row_key, col_key)`` block of ``m``."""
    return m.select_rows(codomain.indices(row_key)).select_columns(domain.indices(col_key))


def tensor_block_embedding(field: Field, left: DirectSum, left_key, right: DirectSum,
                           right_key) -> Matrix:
    """Inclusion of ``L_a (x) R_b`` into ``(sum L) (x) (sum R)``."""
    d1, d2 = left.dim_of(left_key), right.dim_of(right_key)
    o1, o2 = left.offset(left_key), right.offset(right_key)
    n2 = right.dim
    entries = [((o1 + x) * n2 + o2 + y, x * d2 + y, 1) for x in range(d1) for y in range(d2)]
    return Matrix.from_entries(field, left.dim * right.dim, d1 * d2, entries)


def permutation_matrix(field: Field, perm) -> Matrix:
    """Matrix sending basis vector ``j`` to basis vector ``perm[j]``."""
    n = len(perm)
    return Matrix.from_entries(field, n, n, [(perm[j], j, 1) for j in range(n)])


def swap_matrix(field: Field, m: int, n: int) -> Matrix:
    """The flip ``U (x) V -> V (x) U`` for ``dim U = m``, ``dim V = n``."""
    return permutation_matrix(field, [j * m + i for i in range(m) for j in range(n)])
