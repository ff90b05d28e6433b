"""Dense matrices over a :class:`~linpres.field.FieldTable`.

A matrix is a ``numpy.uint8`` array whose entries are field encodings; the
field is always passed explicitly.  Functions that are hot in the
exhaustive searches (``matmul``, ``batch_rank_det``) accept stacks of
matrices with arbitrary leading dimensions.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .field import FieldTable
from . import gf2


class DimensionError(ValueError):
    pass


class UnsupportedSizeError(ValueError):
    pass


def as_matrix(F: FieldTable, entries) -> np.ndarray:
    a = np.array(entries, dtype=np.int64)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D array, got shape {a.shape}")
    if a.size and (a.min() < 0 or a.max() >= F.q):
        raise ValueError(f"entries must lie in 0..{F.q - 1}")
    return a.astype(np.uint8)


def identity(F: FieldTable, n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def zeros(n: int, p: int | None = None) -> np.ndarray:
    return np.zeros((n, n if p is None else p), dtype=np.uint8)


def elementary(n: int, i: int, j: int, p: int | None = None) -> np.ndarray:
    """E_{i,j} with 0-based indices: a single 1 at row i, column j."""
    e = zeros(n, p)
    e[i, j] = 1
    return e


def parse_matrix(text: str, F: FieldTable) -> np.ndarray:
    """Parse ``"0 1 0; 0 0 1; 1 1 0"`` into a matrix."""
    rows = [r.split() for r in text.strip().split(";")]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError(f"ragged matrix literal: {text!r}")
    return as_matrix(F, [[int(x) for x in r] for r in rows])


def format_matrix(a) -> str:
    return "; ".join(" ".join(str(int(x)) for x in row) for row in np.asarray(a))


# elementwise ---------------------------------------------------------------

def add(F, a, b):
    return F.add_table[a, b]


def sub(F, a, b):
    return F.add_table[a, F.neg_table[b]]


def scale(F, c, a):
    return F.mul_table[c, a]


def matmul(F: FieldTable, a, b) -> np.ndarray:
    """Matrix product with numpy broadcasting over leading dimensions."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[-2]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    if F.degree == 1:
        return (np.matmul(a.astype(np.int64), b.astype(np.int64)) % F.p).astype(np.uint8)
    prod = F.mul_table[a[..., :, :, None], b[..., None, :, :]]
    return F.reduce_add(prod, axis=-2)


def trace(F: FieldTable, a):
    return F.reduce_add(np.diagonal(np.asarray(a), axis1=-2, axis2=-1), axis=-1)


def vec(a) -> np.ndarray:
    """Row-major vectorization (the coordinate convention for matrix spaces)."""
    a = np.asarray(a)
    return a.reshape(a.shape[:-2] + (a.shape[-2] * a.shape[-1],))


def unvec(v, n: int, p: int) -> np.ndarray:
    v = np.asarray(v)
    return v.reshape(v.shape[:-1] + (n, p))


def encode(F: FieldTable, vectors) -> np.ndarray:
    """Integer code sum(v_j * q^j) of each vector along the last axis."""
    v = np.asarray(vectors, dtype=np.int64)
    weights = F.q ** np.arange(v.shape[-1], dtype=np.int64)
    return v @ weights


def decode(F: FieldTable, codes, width: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    weights = F.q ** np.arange(width, dtype=np.int64)
    return ((codes[..., None] // weights) % F.q).astype(np.uint8)


def all_vectors(F: FieldTable, width: int) -> np.ndarray:
    """Every vector of K^width, indexed by code."""
    return decode(F, np.arange(F.q ** width), width)


# elimination ---------------------------------------------------------------

def rref(F: FieldTable, a) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with first-nonzero pivoting.

    Returns the full-size reduced matrix and the list of pivot columns.
    """
    r = np.array(a, dtype=np.uint8, copy=True)
    if r.ndim != 2:
        raise DimensionError("rref expects a 2-D array")
    nrows, ncols = r.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.flatnonzero(r[row:, col])
        if not nz.size:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = F.mul_table[F.inv_table[r[row, col]], r[row]]
        for i in np.flatnonzero(r[:, col]):
            if i != row:
                r[i] = F.add_table[r[i], F.neg_table[F.mul_table[r[i, col], r[row]]]]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(F: FieldTable, a) -> int:
    a = np.asarray(a)
    if F.q == 2 and a.ndim == 2 and a.shape[1] <= 64:
        return gf2.rank_words(gf2.pack_rows(a), a.shape[1])
    return len(rref(F, a)[1])


def _square(a):
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"expected square matrix, got shape {a.shape}")
    return a


def det(F: FieldTable, a) -> int:
    """Determinant by elimination, tracking the pivot product and swaps."""
    r = np.array(_square(a), dtype=np.uint8, copy=True)
    n = r.shape[0]
    d = 1
    for col in range(n):
        nz = np.flatnonzero(r[col:, col])
        if not nz.size:
            return 0
        piv = col + int(nz[0])
        if piv != col:
            r[[col, piv]] = r[[piv, col]]
            d = int(F.neg_table[d])
        pv = int(r[col, col])
        d = int(F.mul_table[d, pv])
        r[col] = F.mul_table[F.inv_table[pv], r[col]]
        for i in range(col + 1, n):
            if r[i, col]:
                r[i] = F.add_table[r[i], F.neg_table[F.mul_table[r[i, col], r[col]]]]
    return d


def batch_rank_det(F: FieldTable, a) -> tuple[np.ndarray, np.ndarray | None]:
    """Vectorized ranks (and determinants, for square input) of a stack.

    ``a`` has shape (N, n, p).  Each matrix keeps its own pivot row; the
    elimination proceeds column by column over the whole stack at once.
    """
    r = np.array(a, dtype=np.uint8, copy=True)
    if r.ndim != 3:
        raise DimensionError("batch_rank_det expects shape (N, n, p)")
    N, n, p = r.shape
    square = n == p
    rk = np.zeros(N, dtype=np.int64)
    d = np.ones(N, dtype=np.uint8)
    idx = np.arange(N)
    rows = np.arange(n)
    for col in range(p):
        live = rk < n
        cand = (r[:, :, col] != 0) & (rows[None, :] >= rk[:, None]) & live[:, None]
        has = cand.any(axis=1)
        if square:
            d[~has] = 0
        if not has.any():
            continue
        m = idx[has]
        piv = np.argmax(cand[m], axis=1)
        tgt = rk[m]
        swap = piv != tgt
        if square:
            d[m[swap]] = F.neg_table[d[m[swap]]]
        prow = r[m, piv].copy()
        r[m, piv] = r[m, tgt]
        r[m, tgt] = prow
        pv = prow[:, col]
        if square:
            d[m] = F.mul_table[d[m], pv]
        prow = F.mul_table[F.inv_table[pv][:, None], prow]
        r[m, tgt] = prow
        factors = r[m, :, col].copy()
        factors[np.arange(len(m)), tgt] = 0
        r[m] = F.add_table[r[m], F.neg_table[F.mul_table[factors[:, :, None], prow[:, None, :]]]]
        rk[m] += 1
    return rk, (d if square else None)


def inverse(F: FieldTable, a) -> np.ndarray:
    a = _square(a)
    n = a.shape[0]
    aug = np.concatenate([a, identity(F, n)], axis=1)
    r, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return r[:, n:].copy()


def adjugate(F: FieldTable, a) -> np.ndarray:
    """Transpose of the cofactor matrix (n <= 4)."""
    a = _square(a)
    n = a.shape[0]
    if n > 4:
        raise UnsupportedSizeError("adjugate is implemented for n <= 4")
    if n == 1:
        return np.ones((1, 1), dtype=np.uint8)
    adj = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(a, i, axis=0), j, axis=1)
            c = det(F, minor)
            if (i + j) % 2:
                c = int(F.neg_table[c])
            adj[j, i] = c
    return adj


def kernel_basis(F: FieldTable, a) -> list[np.ndarray]:
    """Null space of ``a`` (vectors x with a x = 0), in reduced echelon form."""
    a = np.asarray(a)
    p = a.shape[1]
    r, pivots = rref(F, a)
    free = [c for c in range(p) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(p, dtype=np.uint8)
        x[f] = 1
        for row, pc in enumerate(pivots):
            x[pc] = F.neg_table[r[row, f]]
        basis.append(x)
    if not basis:
        return []
    r2, piv2 = rref(F, np.stack(basis))
    return [r2[i].copy() for i in range(len(piv2))]


def image_basis(F: FieldTable, a) -> list[np.ndarray]:
    """Column space of ``a`` in reduced echelon form."""
    r, pivots = rref(F, np.asarray(a).T)
    return [r[i].copy() for i in range(len(pivots))]


# polynomials ----------------------------------------------------------------
# Coefficient lists are low degree first: [c0, c1, ..., cn].

def _poly_trim(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def poly_add(F, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([int(F.add_table[x, y]) for x, y in zip(a, b)])


def poly_mul(F, a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = int(F.add_table[out[i + j], F.mul_table[x, y]])
    return _poly_trim(out)


def poly_neg(F, a):
    return [int(F.neg_table[x]) for x in a]


def _poly_det(F, m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = [0]
    for j in range(n):
        if m[0][j] == [0]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = poly_mul(F, m[0][j], _poly_det(F, minor))
        if j % 2:
            term = poly_neg(F, term)
        total = poly_add(F, total, term)
    return total


def char_poly(F: FieldTable, a) -> list[int]:
    """Coefficients of det(tI - A), low degree first (n <= 4)."""
    a = _square(a)
    n = a.shape[0]
    if n > 4:
        raise UnsupportedSizeError("char_poly is implemented for n <= 4")
    m = [[_poly_trim([int(F.neg_table[a[i, j]])] + ([1] if i == j else []))
          for j in range(n)] for i in range(n)]
    return _poly_det(F, m)


def poly_eval_matrix(F: FieldTable, coeffs, a) -> np.ndarray:
    """c0 I + c1 A + ... evaluated by Horner's rule."""
    a = _square(a)
    n = a.shape[0]
    out = np.zeros((n, n), dtype=np.uint8)
    for c in reversed(list(coeffs)):
        out = matmul(F, out, a)
        out = F.add_table[out, F.mul_table[c, identity(F, n)]]
    return out


def companion(F: FieldTable, coeffs) -> np.ndarray:
    """Companion matrix of the monic polynomial with low coefficients ``coeffs``.

    Ones on the subdiagonal, last column ``-c0, ..., -c_{n-1}``.
    """
    n = len(coeffs)
    c = np.zeros((n, n), dtype=np.uint8)
    for i in range(1, n):
        c[i, i - 1] = 1
    c[:, n - 1] = F.neg_table[np.asarray(coeffs, dtype=np.uint8)]
    return c


def commutator_operator(F: FieldTable, a) -> np.ndarray:
    """Matrix of X -> AX - XA acting on row-major vec(X)."""
    a = _square(a)
    n = a.shape[0]
    cols = []
    for k in range(n * n):
        x = np.zeros(n * n, dtype=np.uint8)
        x[k] = 1
        x = x.reshape(n, n)
        cols.append(vec(sub(F, matmul(F, a, x), matmul(F, x, a))))
    return np.stack(cols, axis=1)


def centralizer_dim(F: FieldTable, a) -> int:
    n = _square(a).shape[0]
    return n * n - rank(F, commutator_operator(F, a))


# whole-space tables -----------------------------------------------------------

TABLE_LIMIT = 1 << 20


class SpaceTables:
    """Per-code rank/determinant tables for every matrix of M_{n,p}(GF(q))."""

    def __init__(self, F: FieldTable, n: int, p: int):
        size = F.q ** (n * p)
        if size > TABLE_LIMIT:
            raise UnsupportedSizeError(
                f"M_{n},{p}(GF({F.q})) has {size} elements; table limit is {TABLE_LIMIT}")
        self.field, self.n, self.p, self.size = F, n, p, size
        ranks = np.empty(size, dtype=np.int8)
        dets = np.empty(size, dtype=np.uint8) if n == p else None
        step = 1 << 16
        for lo in range(0, size, step):
            codes = np.arange(lo, min(size, lo + step))
            mats = decode(F, codes, n * p).reshape(-1, n, p)
            rk, d = batch_rank_det(F, mats)
            ranks[lo:lo + len(codes)] = rk
            if dets is not None:
                dets[lo:lo + len(codes)] = d
        ranks.setflags(write=False)
        self.rank = ranks
        self.det = dets
        if dets is not None:
            dets.setflags(write=False)
            self.invertible = ranks == n
            self.invertible.setflags(write=False)
        else:
            self.invertible = None
        self._colspace = None
        self._add = None
        self._smul = None

    @property
    def colspace_id(self) -> np.ndarray:
        """Integer id of each matrix's column space (equal ids iff equal images)."""
        if self._colspace is None:
            ids = {}
            out = np.empty(self.size, dtype=np.int64)
            mats = all_vectors(self.field, self.n * self.p).reshape(-1, self.n, self.p)
            for c in range(self.size):
                key = np.stack(image_basis(self.field, mats[c])).tobytes() if self.rank[c] else b""
                out[c] = ids.setdefault(key, len(ids))
            self._colspace = out
        return self._colspace

    @property
    def add_codes(self) -> np.ndarray:
        """Addition table on codes (size x size)."""
        if self._add is None:
            if self.size > 1024:
                raise UnsupportedSizeError("code addition table limited to 1024 codes")
            v = all_vectors(self.field, self.n * self.p)
            s = self.field.add_table[v[:, None, :], v[None, :, :]]
            self._add = encode(self.field, s).astype(np.int32)
        return self._add

    @property
    def smul_codes(self) -> np.ndarray:
        """Scalar multiplication table: smul_codes[c, code]."""
        if self._smul is None:
            v = all_vectors(self.field, self.n * self.p)
            s = self.field.mul_table[np.arange(self.field.q)[:, None, None], v[None]]
            self._smul = encode(self.field, s).astype(np.int32)
        return self._smul


@lru_cache(maxsize=None)
def space_tables(F: FieldTable, n: int, p: int | None = None) -> SpaceTables:
    return SpaceTables(F, n, n if p is None else p)
