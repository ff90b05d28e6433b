"""Linear subspaces of K^d and of matrix spaces, stored by canonical RREF basis."""

from __future__ import annotations

from itertools import combinations
from typing import Iterator

import numpy as np

from .field import FieldTable
from . import matrix as mx

ELEMENT_LIMIT = 1 << 24
SUBSPACE_LIMIT = 1 << 32


class AmbientMismatchError(ValueError):
    pass


class EnumerationGuardError(RuntimeError):
    pass


def _canonical(F, rows, d):
    rows = np.asarray(rows, dtype=np.uint8).reshape(-1, d)
    if not rows.shape[0]:
        return np.zeros((0, d), dtype=np.uint8)
    r, pivots = mx.rref(F, rows)
    return r[:len(pivots)].copy()


class Subspace:
    """A subspace of K^d, or of M_{n,p}(K) vectorized row-major (d = n p).

    ``basis`` is the reduced row echelon basis without zero rows; two
    subspaces compare equal iff their bases are identical.
    """

    __slots__ = ("field", "shape", "basis", "_key")

    def __init__(self, field: FieldTable, shape, rows=(), *, canonical=False):
        shape = (shape,) if isinstance(shape, (int, np.integer)) else tuple(shape)
        d = int(np.prod(shape))
        basis = (np.asarray(rows, dtype=np.uint8).reshape(-1, d).copy()
                 if canonical else _canonical(field, rows, d))
        basis.setflags(write=False)
        self.field = field
        self.shape = shape
        self.basis = basis
        self._key = None

    # construction ------------------------------------------------------------

    @classmethod
    def full(cls, F, shape):
        d = int(np.prod(shape if not isinstance(shape, int) else (shape,)))
        return cls(F, shape, np.eye(d, dtype=np.uint8), canonical=True)

    @classmethod
    def zero(cls, F, shape):
        return cls(F, shape, (), canonical=True)

    # basic properties ----------------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        return int(np.prod(self.shape))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    @property
    def is_matrix_space(self) -> bool:
        return len(self.shape) == 2

    @property
    def is_square(self) -> bool:
        return self.is_matrix_space and self.shape[0] == self.shape[1]

    def basis_matrices(self) -> np.ndarray:
        return self.basis.reshape((self.dim,) + self.shape)

    def key(self):
        if self._key is None:
            self._key = (self.field.q, self.shape, self.basis.shape[0], self.basis.tobytes())
        return self._key

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        amb = "x".join(map(str, self.shape))
        return f"Subspace(GF({self.field.q}), {amb}, dim={self.dim})"

    def _check(self, other):
        if self.field is not other.field or self.shape != other.shape:
            raise AmbientMismatchError(f"{self!r} and {other!r} live in different spaces")

    # elements ------------------------------------------------------------

    def coordinate_tuples(self) -> np.ndarray:
        """All q^dim coefficient tuples in odometer order (first coordinate fastest)."""
        if self.field.q ** self.dim > ELEMENT_LIMIT:
            raise EnumerationGuardError(
                f"{self!r} has {self.field.q}^{self.dim} elements (limit {ELEMENT_LIMIT})")
        return mx.all_vectors(self.field, self.dim)

    def elements(self) -> np.ndarray:
        """All elements as vectors, shape (q^dim, d), in odometer order."""
        coeffs = self.coordinate_tuples()
        if not self.dim:
            return np.zeros((1, self.ambient_dim), dtype=np.uint8)
        return mx.matmul(self.field, coeffs, self.basis)

    def element_codes(self) -> np.ndarray:
        return mx.encode(self.field, self.elements())

    def combine(self, coeffs) -> np.ndarray:
        """The vector sum(coeffs[i] * basis[i])."""
        return mx.matmul(self.field, np.asarray(coeffs, dtype=np.uint8)[None, :], self.basis)[0]

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` on the canonical basis (v must be a member)."""
        v = np.asarray(v, dtype=np.uint8).reshape(-1)
        c = np.zeros(self.dim, dtype=np.uint8)
        rest = v.copy()
        F = self.field
        for i, row in enumerate(self.basis):
            pc = int(np.flatnonzero(row)[0])
            c[i] = rest[pc]
            rest = F.add_table[rest, F.neg_table[F.mul_table[c[i], row]]]
        if rest.any():
            raise ValueError("vector is not in the subspace")
        return c

    # lattice -------------------------------------------------------------

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.uint8).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise AmbientMismatchError("vector has the wrong length")
        if not self.dim:
            return not v.any()
        return mx.rank(self.field, np.vstack([self.basis, v])) == self.dim

    def __contains__(self, v):
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        self._check(other)
        return join(self, other).dim == other.dim

    def __le__(self, other):
        return self.issubspace(other)

    def annihilator(self) -> np.ndarray:
        """Rows h with h . x = 0 for every x in the subspace, shape (codim, d)."""
        if not self.dim:
            return np.eye(self.ambient_dim, dtype=np.uint8)
        ker = mx.kernel_basis(self.field, self.basis)
        if not ker:
            return np.zeros((0, self.ambient_dim), dtype=np.uint8)
        return np.stack(ker)

    def transpose(self) -> "Subspace":
        if not self.is_matrix_space:
            raise AmbientMismatchError("transpose needs a matrix ambient")
        n, p = self.shape
        rows = self.basis_matrices().swapaxes(1, 2).reshape(self.dim, n * p)
        return Subspace(self.field, (p, n), rows)

    def map(self, op: np.ndarray) -> "Subspace":
        """Image under the linear operator ``op`` (d x d) acting on vectors."""
        rows = mx.matmul(self.field, self.basis, np.asarray(op).T)
        return Subspace(self.field, self.shape, rows)

    # rank data -------------------------------------------------------------

    def ranks(self) -> np.ndarray:
        """Rank of every element, in odometer order."""
        if not self.is_matrix_space:
            raise AmbientMismatchError("ranks need a matrix ambient")
        n, p = self.shape
        try:
            tab = mx.space_tables(self.field, n, p)
        except mx.UnsupportedSizeError:
            tab = None
        if tab is not None:
            return tab.rank[self.element_codes()].astype(np.int64)
        out = []
        elems = self.elements()
        step = 1 << 16
        for lo in range(0, len(elems), step):
            out.append(mx.batch_rank_det(self.field, elems[lo:lo + step].reshape(-1, n, p))[0])
        return np.concatenate(out)


# lattice operations ----------------------------------------------------------

def span(F: FieldTable, vectors, shape) -> Subspace:
    shape = (shape,) if isinstance(shape, int) else tuple(shape)
    d = int(np.prod(shape))
    vectors = np.asarray(vectors, dtype=np.uint8)
    return Subspace(F, shape, vectors.reshape(-1, d))


def join(S: Subspace, T: Subspace) -> Subspace:
    S._check(T)
    return Subspace(S.field, S.shape, np.vstack([S.basis, T.basis]))


def meet(S: Subspace, T: Subspace) -> Subspace:
    """Intersection, as the annihilator of the sum of annihilators."""
    S._check(T)
    hs = np.vstack([S.annihilator(), T.annihilator()])
    if not hs.shape[0]:
        return Subspace.full(S.field, S.shape)
    ker = mx.kernel_basis(S.field, hs)
    return Subspace(S.field, S.shape, np.stack(ker) if ker else ())


def member(S: Subspace, v) -> bool:
    return S.contains(v)


def kernel_subspace(F: FieldTable, op, shape) -> Subspace:
    ker = mx.kernel_basis(F, op)
    return Subspace(F, shape, np.stack(ker) if ker else ())


def trace_orthogonal(S: Subspace) -> Subspace:
    """{B : tr(AB) = 0 for all A in S}.

    tr(AB) = vec(A) . vec(B^T), so this is the transpose of the dot-product
    annihilator.
    """
    if not S.is_square:
        raise AmbientMismatchError("trace form needs a square matrix ambient")
    n = S.shape[0]
    ann = S.annihilator()
    rows = ann.reshape(-1, n, n).swapaxes(1, 2).reshape(-1, n * n)
    return Subspace(S.field, S.shape, rows)


def centralizer(F: FieldTable, a) -> Subspace:
    a = np.asarray(a)
    return kernel_subspace(F, mx.commutator_operator(F, a), a.shape)


def rank_profile(S: Subspace) -> tuple[int, ...]:
    """Number of elements of each rank 0..min(n, p)."""
    n, p = S.shape
    return tuple(int(c) for c in np.bincount(S.ranks(), minlength=min(n, p) + 1))


def is_singular_subspace(S: Subspace) -> bool:
    if not S.is_square:
        raise AmbientMismatchError("singularity needs a square matrix ambient")
    return not np.any(S.ranks() == S.shape[0])


def count_nonsingular(S: Subspace) -> int:
    if not S.is_square:
        raise AmbientMismatchError("singularity needs a square matrix ambient")
    return int(np.count_nonzero(S.ranks() == S.shape[0]))


# Grassmannian enumeration --------------------------------------------------------

def gaussian_binomial(d: int, k: int, q: int) -> int:
    if k < 0 or k > d:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** d - q ** i
        den *= q ** k - q ** i
    return num // den


def pivot_patterns(d: int, k: int) -> list[tuple[int, ...]]:
    """Pivot column sets in lexicographic order; the unit of partitioned work."""
    return list(combinations(range(d), k))


def free_slots(pivots, d):
    """(row, column) pairs that are free in an RREF with these pivots."""
    pset = set(pivots)
    return [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, d) if j not in pset]


def rref_batch(F: FieldTable, pivots, d: int) -> np.ndarray:
    """Every RREF basis with the given pivot columns, shape (q^f, k, d).

    Free entries run in odometer order (first free slot fastest).
    """
    k = len(pivots)
    slots = free_slots(pivots, d)
    vals = mx.all_vectors(F, len(slots))
    out = np.zeros((len(vals), k, d), dtype=np.uint8)
    for i, pc in enumerate(pivots):
        out[:, i, pc] = 1
    for s, (i, j) in enumerate(slots):
        out[:, i, j] = vals[:, s]
    return out


def _check_guard(d, k, q):
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got k={k}, d={d}")
    total = gaussian_binomial(d, k, q)
    if total > SUBSPACE_LIMIT:
        raise EnumerationGuardError(
            f"GF({q})^{d} has {total} subspaces of dimension {k} (limit {SUBSPACE_LIMIT})")
    return total


def enumerate_subspaces(d: int, k: int, F: FieldTable, shape=None,
                        patterns=None) -> Iterator[Subspace]:
    """Yield every k-dimensional subspace of K^d exactly once.

    Order: pivot-column set (lexicographic), then free entries (odometer).
    ``patterns`` restricts to a sub-list of :func:`pivot_patterns`, which is
    how the work is split into disjoint chunks.
    """
    _check_guard(d, k, F.q)
    shape = d if shape is None else shape
    for piv in (pivot_patterns(d, k) if patterns is None else patterns):
        for rows in rref_batch(F, piv, d):
            yield Subspace(F, shape, rows, canonical=True)


def parse_subspace(text: str, F: FieldTable) -> Subspace:
    """Load a generator list: one matrix literal per non-empty line."""
    mats = [mx.parse_matrix(line, F) for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")]
    if not mats:
        raise ValueError("empty subspace fixture")
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise AmbientMismatchError("generators have different shapes")
    return span(F, [mx.vec(m) for m in mats], shape)


def format_subspace(S: Subspace) -> str:
    return "\n".join(mx.format_matrix(m) for m in S.basis_matrices())
