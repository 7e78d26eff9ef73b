"""Brute-force reference computations in plain Python.

Nothing here imports the package's linear algebra: scalars are Fractions
over Q or ints mod p, matrices are lists of rows.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product


def norm(x, p):
    if p is None:
        return Fraction(x)
    x = Fraction(x)
    return (x.numerator * pow(x.denominator, -1, p)) % p


def inv(x, p):
    return 1 / Fraction(x) if p is None else pow(x, -1, p)


def rank(rows, p=None) -> int:
    """Gaussian elimination on a copy of ``rows``."""
    m = [[norm(v, p) for v in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        iv = inv(m[r][c], p)
        m[r] = [norm(v * iv, p) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                fac = m[i][c]
                m[i] = [norm(a - fac * b, p) for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows, ncols: int, p=None) -> list:
    """Basis (list of vectors) of ``{v : rows v = 0}``."""
    m = [[norm(v, p) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        iv = inv(m[r][c], p)
        m[r] = [norm(v * iv, p) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                fac = m[i][c]
                m[i] = [norm(a - fac * b, p) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [norm(0, p)] * ncols
        v[fc] = norm(1, p)
        for i, pc in enumerate(pivots):
            v[pc] = norm(-m[i][fc], p)
        basis.append(v)
    return basis


def matmul(a, b, p=None):
    nb = len(b[0]) if b else 0
    return [[norm(sum(a[i][k] * b[k][j] for k in range(len(b))), p) for j in range(nb)]
            for i in range(len(a))]


def kron(a, b, p=None):
    return [[norm(x * y, p) for x in ra for y in rb] for ra in a for rb in b]


def transpose(a):
    return [list(r) for r in zip(*a)] if a else []


def _words(g, n):
    return list(product(range(g), repeat=n))


def _place(g, left, vec, right):
    """Vector ``e_left (x) vec (x) e_right`` in ``V^{(x)(len(left)+2+len(right))}``."""
    n = len(left) + 2 + len(right)
    out = [0] * g ** n
    for k, c in enumerate(vec):
        if c == 0:
            continue
        a, b = divmod(k, g)
        word = tuple(left) + (a, b) + tuple(right)
        idx = 0
        for w in word:
            idx = idx * g + w
        out[idx] = c
    return out


def algebra_dims(g: int, relations, N: int, p=None) -> list:
    """``dim V^n - dim(sum_i V^i W V^{n-2-i})`` by spanning all placed relations."""
    dims = [1]
    for n in range(1, N + 1):
        if n == 1:
            dims.append(g)
            continue
        vecs = []
        for i in range(n - 1):
            for left in _words(g, i):
                for right in _words(g, n - 2 - i):
                    for w in relations:
                        vecs.append(_place(g, left, w, right))
        dims.append(g ** n - rank(vecs, p) if vecs else g ** n)
    return dims


def coring_dims(g: int, relations, N: int, p=None) -> list:
    """``dim cap_i V^i W V^{n-2-i}``, via annihilators of ``W`` placed at each position."""
    dims = [1]
    ann = nullspace(relations, g * g, p)
    for n in range(1, N + 1):
        if n == 1:
            dims.append(g)
            continue
        funcs = []
        for i in range(n - 1):
            for left in _words(g, i):
                for right in _words(g, n - 2 - i):
                    for phi in ann:
                        funcs.append(_place(g, left, phi, right))
        dims.append(g ** n - rank(funcs, p) if funcs else g ** n)
    return dims


def homology_from_ranks(dims, ranks, chain: bool) -> list:
    n = len(dims)
    out = []
    for i in range(n):
        if chain:
            outgoing = ranks[i - 1] if i > 0 else 0
            incoming = ranks[i] if i < n - 1 else 0
        else:
            outgoing = ranks[i] if i < n - 1 else 0
            incoming = ranks[i - 1] if i > 0 else 0
        out.append(dims[i] - outgoing - incoming)
    return out


def quantum_plane_product(q, a, b, c, d, p=None):
    """``(x^a y^b)(x^c y^d) = q^{bc} x^{a+c} y^{b+d}`` when ``y x = q x y``."""
    return norm(Fraction(q) ** (b * c), p)


def exhaustive_kernel_dim(rows, p: int) -> int:
    """Count vectors over GF(p) killed by ``rows`` and take the log."""
    ncols = len(rows[0])
    count = 0
    for v in product(range(p), repeat=ncols):
        if all(sum(r[j] * v[j] for j in range(ncols)) % p == 0 for r in rows):
            count += 1
    d = 0
    while p ** d < count:
        d += 1
    assert p ** d == count
    return d


def ladder_apply(s_rows, nx: int, ny: int, xs, ys, p=None) -> dict:
    """Move ``x_xs (x) y_ys`` to ``Y^q (x) X^p`` by adjacent swaps with ``s``.

    ``s_rows`` is ``s: X (x) Y -> Y (x) X`` as rows indexed by ``y * nx + x``,
    columns by ``x * ny + y``.  The rightmost ``x`` travels first, each
    ``x`` passing the ``y`` letters from left to right.  Returns
    ``{(ys', xs'): coefficient}``.
    """
    state = {tuple([("x", i) for i in xs] + [("y", j) for j in ys]): norm(1, p)}
    q = len(ys)
    for k in range(len(xs) - 1, -1, -1):
        for step in range(q):
            pos = k + step
            nxt = {}
            for word, c in state.items():
                (_, xi), (_, yj) = word[pos], word[pos + 1]
                col = xi * ny + yj
                for row in range(nx * ny):
                    v = s_rows[row][col]
                    if v == 0:
                        continue
                    yk, xl = divmod(row, nx)
                    w = word[:pos] + (("y", yk), ("x", xl)) + word[pos + 2:]
                    nxt[w] = norm(nxt.get(w, 0) + c * v, p)
            state = {w: c for w, c in nxt.items() if c != 0}
    out = {}
    for word, c in state.items():
        ys2 = tuple(i for t, i in word if t == "y")
        xs2 = tuple(i for t, i in word if t == "x")
        out[(ys2, xs2)] = c
    return out


def descends(s_rows, nA: int, nB: int, WA, WB, p=None) -> bool:
    """Does ``s: V_B (x) V_A -> V_A (x) V_B`` map ``V_B (x) W_A`` into ``W_A (x) V_B``
    and ``W_B (x) V_A`` into ``V_A (x) W_B``?  Relation vectors are length n^2 lists."""

    def index(word, n):
        idx = 0
        for w in word:
            idx = idx * n + w
        return idx

    def contained(imgs, target):
        if not imgs:
            return True
        return rank(target + imgs, p) == rank(target, p)

    # V_B (x) W_A: X = B letters (one), Y = A letters (two)
    imgs = []
    for b in range(nB):
        for w in WA:
            img = [0] * (nA * nA * nB)
            for k, c in enumerate(w):
                if c == 0:
                    continue
                a1, a2 = divmod(k, nA)
                for (ys, xs), v in ladder_apply(s_rows, nB, nA, (b,), (a1, a2), p).items():
                    i = index(ys, nA) * nB + xs[0]
                    img[i] = norm(img[i] + c * v, p)
            imgs.append(img)
    target = [[w[k // nB] if k % nB == b else 0 for k in range(nA * nA * nB)]
              for w in WA for b in range(nB)]
    if not contained(imgs, target):
        return False
    # W_B (x) V_A: X = B letters (two), Y = A letters (one)
    imgs = []
    for w in WB:
        for a in range(nA):
            img = [0] * (nA * nB * nB)
            for k, c in enumerate(w):
                if c == 0:
                    continue
                b1, b2 = divmod(k, nB)
                for (ys, xs), v in ladder_apply(s_rows, nB, nA, (b1, b2), (a,), p).items():
                    i = ys[0] * nB * nB + index(xs, nB)
                    img[i] = norm(img[i] + c * v, p)
            imgs.append(img)
    target = [[w[k % (nB * nB)] if k // (nB * nB) == a else 0 for k in range(nA * nB * nB)]
              for w in WB for a in range(nA)]
    return contained(imgs, target)
