"""GL_n x GL_p action on matrix subspaces and Frobenius automorphisms.

Equivalence is (P, Q).V = P V Q^{-1}.  A Frobenius automorphism of M_n(K)
is M -> P M Q or M -> P M^T Q; transposition is *not* part of equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .field import FieldTable
from . import matrix as mx
from .subspace import (AmbientMismatchError, EnumerationGuardError, Subspace,
                       rank_profile, trace_orthogonal)

GL_LIMIT = 2_000_000
FROBENIUS_LIMIT = 4_000_000


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def enumerate_GL(n: int, F: FieldTable) -> Iterator[np.ndarray]:
    """Every invertible n x n matrix once, in increasing code order."""
    yield from gl_array(n, F)


@lru_cache(maxsize=None)
def gl_array(n: int, F: FieldTable) -> np.ndarray:
    """GL_n(K) as a read-only stack (|GL|, n, n) in increasing code order."""
    if gl_order(n, F.q) > GL_LIMIT:
        raise EnumerationGuardError(
            f"|GL_{n}(GF({F.q}))| = {gl_order(n, F.q)} exceeds {GL_LIMIT}")
    size = F.q ** (n * n)
    try:
        tab = mx.space_tables(F, n)
        codes = np.flatnonzero(tab.invertible)
    except mx.UnsupportedSizeError:
        parts = []
        step = 1 << 16
        for lo in range(0, size, step):
            c = np.arange(lo, min(size, lo + step))
            rk, _ = mx.batch_rank_det(F, mx.decode(F, c, n * n).reshape(-1, n, n))
            parts.append(c[rk == n])
        codes = np.concatenate(parts)
    out = mx.decode(F, codes, n * n).reshape(-1, n, n)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def gl_inverses(n: int, F: FieldTable) -> np.ndarray:
    g = gl_array(n, F)
    out = np.stack([mx.inverse(F, m) for m in g])
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _gl_index(n: int, F: FieldTable) -> dict:
    return {int(c): i for i, c in enumerate(mx.encode(F, mx.vec(gl_array(n, F))))}


def gl_index(F: FieldTable, m) -> int:
    m = np.asarray(m)
    return _gl_index(m.shape[0], F)[int(mx.encode(F, mx.vec(m)))]


# Frobenius maps ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FrobeniusMap:
    """M -> P M Q, or M -> P M^T Q when ``transposed``."""

    P: np.ndarray
    Q: np.ndarray
    transposed: bool
    field: FieldTable

    def __call__(self, m):
        F = self.field
        m = np.asarray(m)
        if self.transposed:
            m = m.swapaxes(-1, -2)
        return mx.matmul(F, mx.matmul(F, self.P, m), self.Q)

    apply = __call__

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def operator(self) -> np.ndarray:
        """Matrix acting on row-major vec(M)."""
        return frobenius_operators(self.field, self.P[None], self.Q[None],
                                   np.array([self.transposed]))[0]

    def compose(self, other: "FrobeniusMap") -> "FrobeniusMap":
        """self o other."""
        F = self.field
        if not self.transposed:
            P = mx.matmul(F, self.P, other.P)
            Q = mx.matmul(F, other.Q, self.Q)
            return FrobeniusMap(P, Q, other.transposed, F)
        P = mx.matmul(F, self.P, other.Q.T)
        Q = mx.matmul(F, other.P.T, self.Q)
        return FrobeniusMap(P, Q, not other.transposed, F)

    def inverse(self) -> "FrobeniusMap":
        F = self.field
        Pi, Qi = mx.inverse(F, self.P), mx.inverse(F, self.Q)
        if not self.transposed:
            return FrobeniusMap(Pi, Qi, False, F)
        return FrobeniusMap(Qi.T.copy(), Pi.T.copy(), True, F)

    def same_action(self, other: "FrobeniusMap") -> bool:
        return np.array_equal(self.operator(), other.operator())

    def __repr__(self):
        kind = "v" if self.transposed else "u"
        return f"{kind}[P={mx.format_matrix(self.P)} | Q={mx.format_matrix(self.Q)}]"

    @classmethod
    def identity(cls, n: int, F: FieldTable) -> "FrobeniusMap":
        return cls(mx.identity(F, n), mx.identity(F, n), False, F)

    @classmethod
    def transpose_map(cls, n: int, F: FieldTable) -> "FrobeniusMap":
        return cls(mx.identity(F, n), mx.identity(F, n), True, F)


def frobenius_operators(F: FieldTable, P, Q, transposed) -> np.ndarray:
    """Operators on vec(M) for stacks of (P, Q, transposed), shape (N, n^2, n^2).

    For u: entry [(i,j), (k,l)] is P[i,k] Q[l,j].  For v the roles of k and
    l swap, because (P M^T Q)_ij = sum P[i,k] M[l,k] Q[l,j].
    """
    P = np.asarray(P)
    Q = np.asarray(Q)
    N, n, _ = P.shape
    # axes: batch, i, j, k, l
    op = F.mul_table[P[:, :, None, :, None], Q.swapaxes(1, 2)[:, None, :, None, :]]
    t = np.asarray(transposed, dtype=bool)
    if t.any():
        op[t] = op[t].swapaxes(-1, -2)
    return op.reshape(N, n * n, n * n)


class FrobeniusTable:
    """All distinct Frobenius automorphisms of M_n(K), one representative each.

    Candidates run over (transposed, P, Q) with u-maps first and P, Q in
    GL code order; the first candidate realizing each operator is kept.
    """

    def __init__(self, n: int, F: FieldTable):
        g = gl_array(n, F)
        G = len(g)
        if 2 * G * G > FROBENIUS_LIMIT:
            raise EnumerationGuardError(
                f"{2 * G * G} Frobenius candidates for n={n}, q={F.q} exceed {FROBENIUS_LIMIT}")
        pi, qi = np.divmod(np.arange(G * G), G)
        ops = []
        for t in (False, True):
            ops.append(frobenius_operators(F, g[pi], g[qi], np.full(G * G, t)))
        ops = np.concatenate(ops)
        flat = ops.reshape(len(ops), -1)
        _, first = np.unique(flat, axis=0, return_index=True)
        keep = np.sort(first)
        self.field, self.n = F, n
        self.ops = ops[keep]
        self.ops.setflags(write=False)
        self.transposed = keep >= G * G
        self.P_idx = pi[keep % (G * G)]
        self.Q_idx = qi[keep % (G * G)]

    def __len__(self):
        return len(self.ops)

    def __getitem__(self, i) -> FrobeniusMap:
        g = gl_array(self.n, self.field)
        return FrobeniusMap(g[self.P_idx[i]].copy(), g[self.Q_idx[i]].copy(),
                            bool(self.transposed[i]), self.field)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def images(self, vectors) -> np.ndarray:
        """Apply every operator to each vector: shape (N, m, d)."""
        v = np.asarray(vectors)
        return mx.matmul(self.field, v[None], self.ops.swapaxes(1, 2))

    def stabilizer(self, S: Subspace) -> np.ndarray:
        """Indices of the maps sending S into (hence onto) itself."""
        imgs = self.images(S.basis)
        h = S.annihilator()
        if not h.shape[0]:
            return np.arange(len(self))
        test = mx.matmul(self.field, imgs, h.T)
        return np.flatnonzero(~test.reshape(len(self), -1).any(axis=1))


@lru_cache(maxsize=None)
def frobenius_table(n: int, F: FieldTable) -> FrobeniusTable:
    return FrobeniusTable(n, F)


def enumerate_frobenius(n: int, F: FieldTable) -> Iterator[FrobeniusMap]:
    yield from frobenius_table(n, F)


# the equivalence action ---------------------------------------------------------

def act(P, Q, S: Subspace) -> Subspace:
    """(P, Q).S = P S Q^{-1}."""
    F = S.field
    mats = mx.matmul(F, mx.matmul(F, P, S.basis_matrices()), mx.inverse(F, Q))
    return Subspace(F, S.shape, mx.vec(mats))


def apply_frobenius(g: FrobeniusMap, S: Subspace) -> Subspace:
    if not S.is_square or S.shape[0] != g.n:
        raise AmbientMismatchError(f"{g!r} does not act on {S!r}")
    return Subspace(S.field, S.shape, mx.vec(g(S.basis_matrices())))


def _profile(S):
    try:
        return rank_profile(S)
    except (EnumerationGuardError, mx.UnsupportedSizeError):
        return None


def are_equivalent(S: Subspace, T: Subspace, *, prefilter=True):
    """A witness (P, Q) with P S Q^{-1} = T, or None.

    Checks dimension and rank profile first, then scans P, and for each P
    all Q at once; the witness returned is the least (P, Q) in GL order.
    """
    S._check(T)
    if not S.is_matrix_space:
        raise AmbientMismatchError("equivalence needs a matrix ambient")
    F = S.field
    n, p = S.shape
    if S.dim != T.dim:
        return None
    if S == T:
        return mx.identity(F, n), mx.identity(F, p)
    if prefilter:
        a, b = _profile(S), _profile(T)
        if a is not None and b is not None and a != b:
            return None
    h = T.annihilator()
    gp = gl_array(p, F)
    gpi = gl_inverses(p, F)
    B = S.basis_matrices()
    for P in gl_array(n, F):
        PB = mx.matmul(F, P, B)
        imgs = mx.vec(mx.matmul(F, PB[None], gpi[:, None]))
        ok = ~mx.matmul(F, imgs, h.T).reshape(len(gp), -1).any(axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            return P.copy(), gp[hit[0]].copy()
    return None


def orbit(S: Subspace) -> dict:
    """Every P S Q^{-1}, mapped to the least (P, Q) producing it (small cases)."""
    F = S.field
    n, p = S.shape
    gn, gp, gpi = gl_array(n, F), gl_array(p, F), gl_inverses(p, F)
    out = {}
    B = S.basis_matrices()
    for P in gn:
        PB = mx.matmul(F, P, B)
        imgs = mx.vec(mx.matmul(F, PB[None], gpi[:, None]))
        for j in range(len(gp)):
            T = Subspace(F, S.shape, imgs[j])
            if T not in out:
                out[T] = (P.copy(), gp[j].copy())
    return out


def hyperplane_orbit(V: Subspace) -> int:
    """Rank of the nonzero matrices in the trace-orthogonal line of V."""
    if V.codim != 1:
        raise ValueError(f"{V!r} is not a hyperplane")
    W = trace_orthogonal(V)
    return mx.rank(V.field, W.basis_matrices()[0])
