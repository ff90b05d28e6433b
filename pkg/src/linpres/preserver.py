"""Linear maps between matrix subspaces and exhaustive preserver checks.

A :class:`SubspaceLinearMap` is stored as the images of its domain's
canonical basis.  Predicates are evaluated over *every* element of the
domain; nothing here samples.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator

import numpy as np

from .field import FieldTable, GF2
from . import catalog
from . import matrix as mx
from .action import (FrobeniusMap, EnumerationGuardError, frobenius_table,
                     gl_array, gl_inverses)
from .subspace import Subspace, centralizer, count_nonsingular, meet

SEARCH_LIMIT = 10 ** 8
MAP_SPACE_LIMIT = 1 << 24


class SubspaceLinearMap:
    """Linear map from ``domain`` into a matrix space of the same shape family."""

    def __init__(self, domain: Subspace, images, codomain: Subspace | None = None):
        images = np.asarray(images, dtype=np.uint8)
        if codomain is None:
            shape = images.shape[1:] if images.ndim == 3 else domain.shape
            codomain = Subspace.full(domain.field, shape)
        images = images.reshape(domain.dim, codomain.ambient_dim)
        if images.shape[0] != domain.dim:
            raise ValueError("need one image per domain basis vector")
        for y in images:
            if not codomain.contains(y):
                raise ValueError("image lies outside the codomain")
        images.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.images = images

    @classmethod
    def from_function(cls, domain: Subspace, func: Callable, codomain=None):
        """Tabulate a (linear) matrix function on the domain basis."""
        imgs = [mx.vec(np.asarray(func(b), dtype=np.uint8)) for b in domain.basis_matrices()]
        return cls(domain, np.stack(imgs), codomain)

    @classmethod
    def restriction(cls, g: FrobeniusMap, domain: Subspace):
        return cls.from_function(domain, g)

    @property
    def field(self) -> FieldTable:
        return self.domain.field

    def __call__(self, m) -> np.ndarray:
        c = self.domain.coordinates(mx.vec(np.asarray(m)))
        v = mx.matmul(self.field, c[None], self.images)[0]
        return v.reshape(self.codomain.shape)

    def image_vectors(self) -> np.ndarray:
        """Image of every domain element, aligned with ``domain.elements()``."""
        return mx.matmul(self.field, self.domain.coordinate_tuples(), self.images)

    def is_injective(self) -> bool:
        return mx.rank(self.field, self.images) == self.domain.dim if self.domain.dim else True

    def image_subspace(self) -> Subspace:
        return Subspace(self.field, self.codomain.shape, self.images)

    def __eq__(self, other):
        return (isinstance(other, SubspaceLinearMap) and self.domain == other.domain
                and self.codomain.shape == other.codomain.shape
                and np.array_equal(self.images, other.images))

    def __repr__(self):
        return f"SubspaceLinearMap({self.domain!r} -> {self.codomain!r})"


def parse_map(text: str, domain: Subspace) -> SubspaceLinearMap:
    """Map fixture: lines ``<basis index>: <matrix literal>``."""
    imgs = {}
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        idx, lit = line.split(":", 1)
        imgs[int(idx)] = mx.vec(mx.parse_matrix(lit, domain.field))
    if sorted(imgs) != list(range(domain.dim)):
        raise ValueError(f"map fixture must give images for basis indices 0..{domain.dim - 1}")
    return SubspaceLinearMap(domain, np.stack([imgs[i] for i in range(domain.dim)]))


def format_map(f: SubspaceLinearMap) -> str:
    shape = f.codomain.shape
    return "\n".join(f"{i}: {mx.format_matrix(y.reshape(shape))}" for i, y in enumerate(f.images))


# per-element properties ----------------------------------------------------------

def _props(F, shape, vectors, what):
    n, p = shape
    try:
        tab = mx.space_tables(F, n, p)
    except mx.UnsupportedSizeError:
        tab = None
    if tab is not None:
        codes = mx.encode(F, vectors)
        if what == "inv":
            return tab.rank[codes] == n
        if what == "rank":
            return tab.rank[codes]
        if what == "det":
            return tab.det[codes]
        if what == "image":
            return tab.colspace_id[codes]
    mats = np.asarray(vectors).reshape(-1, n, p)
    if what == "image":
        return np.array([hash(np.stack(mx.image_basis(F, m)).tobytes()) if m.any() else 0
                         for m in mats])
    rk, d = mx.batch_rank_det(F, mats)
    return {"inv": rk == n, "rank": rk, "det": d}[what]


def _pair(f: SubspaceLinearMap, what):
    x = f.domain.elements()
    y = f.image_vectors()
    return (_props(f.field, f.domain.shape, x, what),
            _props(f.field, f.codomain.shape, y, what))


def is_weak_preserver(f: SubspaceLinearMap) -> bool:
    """Invertible elements go to invertible matrices."""
    a, b = _pair(f, "inv")
    return bool(np.all(~a | b))


def is_strong_preserver(f: SubspaceLinearMap) -> bool:
    """f(M) is invertible exactly when M is."""
    a, b = _pair(f, "inv")
    return bool(np.all(a == b))


def is_det_preserver(f: SubspaceLinearMap) -> bool:
    a, b = _pair(f, "det")
    return bool(np.all(a == b))


def is_rank_preserver(f: SubspaceLinearMap) -> bool:
    a, b = _pair(f, "rank")
    return bool(np.all(a == b))


def is_image_preserver(f: SubspaceLinearMap) -> bool:
    """im f(M) = im M for every M in the domain."""
    a, b = _pair(f, "image")
    return bool(np.all(a == b))


def rank_witness(f: SubspaceLinearMap):
    """First domain element whose rank changes, as (M, rank M, rank f(M)), or None."""
    a, b = _pair(f, "rank")
    bad = np.flatnonzero(a != b)
    if not bad.size:
        return None
    i = int(bad[0])
    return f.domain.elements()[i].reshape(f.domain.shape), int(a[i]), int(b[i])


# the two counterexamples ------------------------------------------------------------

def phi_counterexample(n: int, F: FieldTable) -> SubspaceLinearMap:
    """On H_n: add the (2,2) entry of the leading block to the top of the last column."""
    if n < 3:
        raise ValueError("needs n >= 3")
    H = catalog.H(n, F)

    def phi(m):
        m = m.copy()
        m[0, n - 1] = F.add_table[m[0, n - 1], m[1, 1]]
        return m
    return SubspaceLinearMap.from_function(H, phi)


def alpha(l):
    """[l1 l2] -> [[0, 0], [l2, 0]]."""
    return np.array([[0, 0], [l[1], 0]], dtype=np.uint8)


def beta(c):
    """[c1; c2] -> [[0, 0], [c1, 0]]."""
    return np.array([[0, 0], [c[0], 0]], dtype=np.uint8)


def alphabeta_counterexample() -> SubspaceLinearMap:
    """On V_1(GF(2)): [[M, C], [L, 0]] -> [[M + alpha(L) + beta(C), C], [L, 0]]."""
    F = GF2

    def f(m):
        m = m.copy()
        m[:2, :2] = F.add_table[m[:2, :2], F.add_table[alpha(m[2, :2]), beta(m[:2, 2])]]
        return m
    return SubspaceLinearMap.from_function(catalog.V1_F2(F), f)


def alphabeta_identity() -> list:
    """(L, C) pairs violating L (adj alpha(L) + adj beta(C)) C = 0; empty when the identity holds."""
    F = GF2
    bad = []
    for l in product(range(2), repeat=2):
        for c in product(range(2), repeat=2):
            L = np.array([l], dtype=np.uint8)
            C = np.array([c], dtype=np.uint8).T
            mid = F.add_table[mx.adjugate(F, alpha(l)), mx.adjugate(F, beta(c))]
            if mx.matmul(F, mx.matmul(F, L, mid), C)[0, 0]:
                bad.append((l, c))
    return bad


# Frobenius extension ------------------------------------------------------------------

def _extension_scan(f):
    n = f.domain.shape[0]
    table = frobenius_table(n, f.field)
    imgs = table.images(f.domain.basis)
    ok = np.all(imgs == f.images[None], axis=(1, 2))
    hit = np.flatnonzero(ok)
    return table[int(hit[0])] if hit.size else None


def _solve_right(F, A, Z):
    """All Q with A Q = Z, as (particular, kernel basis) or None."""
    n = A.shape[1]
    aug = np.concatenate([A, Z], axis=1)
    r, piv = mx.rref(F, aug)
    if any(pc >= n for pc in piv):
        return None
    part = np.zeros((n, Z.shape[1]), dtype=np.uint8)
    for row, pc in enumerate(piv):
        part[pc] = r[row, n:]
    return part, mx.kernel_basis(F, A)


def _extension_solve(f):
    """For each P, solve the linear system X_i Q = P^{-1} Y_i and look for an invertible Q."""
    F = f.field
    n = f.domain.shape[0]
    B = f.domain.basis_matrices()
    Y = f.images.reshape(-1, n, n)
    gl = gl_array(n, F)
    gli = gl_inverses(n, F)
    for transposed in (False, True):
        X = B.swapaxes(1, 2) if transposed else B
        A = X.reshape(-1, n)
        for P, Pi in zip(gl, gli):
            Z = mx.matmul(F, Pi, Y).reshape(-1, n)
            sol = _solve_right(F, A, Z)
            if sol is None:
                continue
            part, ker = sol
            free = len(ker)
            if F.q ** (free * n) > MAP_SPACE_LIMIT:
                raise EnumerationGuardError("solution space too large to scan")
            for coeffs in mx.all_vectors(F, free * n):
                Q = part.copy()
                cm = coeffs.reshape(free, n) if free else coeffs.reshape(0, n)
                for kv, row in zip(ker, cm):
                    # add kv * row (outer product) to Q
                    Q = F.add_table[Q, F.mul_table[kv[:, None], row[None, :]]]
                if mx.det(F, Q):
                    return FrobeniusMap(P.copy(), Q, transposed, F)
    return None


def frobenius_extension(f: SubspaceLinearMap, method: str = "auto"):
    """A Frobenius automorphism agreeing with f on its domain, or None.

    ``scan`` tests every distinct Frobenius map; ``solve`` loops over P and
    solves a linear system for Q.  ``auto`` scans when the table fits.
    """
    if not (f.domain.is_square and f.codomain.shape == f.domain.shape):
        raise ValueError("extension needs a map into M_n from a subspace of M_n")
    if method == "scan":
        return _extension_scan(f)
    if method == "solve":
        return _extension_solve(f)
    try:
        return _extension_scan(f)
    except EnumerationGuardError:
        return _extension_solve(f)


class ExtensionIndex:
    """Lookup from basis-image tuples to Frobenius maps, for a fixed domain."""

    def __init__(self, domain: Subspace):
        n = domain.shape[0]
        self.domain = domain
        self.table = frobenius_table(n, domain.field)
        codes = mx.encode(domain.field, self.table.images(domain.basis))
        self._index = {}
        for i, row in enumerate(codes):
            self._index.setdefault(row.tobytes(), i)

    def find(self, image_codes):
        i = self._index.get(np.asarray(image_codes, dtype=np.int64).tobytes())
        return None if i is None else self.table[i]

    def extends(self, image_codes) -> bool:
        return np.asarray(image_codes, dtype=np.int64).tobytes() in self._index


# exhaustive embedding search -------------------------------------------------------------

PREDICATES = {
    "any": (None, None),
    "weak": ("inv", "implies"),
    "strong": ("inv", "equal"),
    "det": ("det", "equal"),
    "rank": ("rank", "equal"),
    "image": ("image", "equal"),
}


def injective_map_count(q: int, dim: int, ambient: int) -> int:
    out = 1
    for i in range(dim):
        out *= q ** ambient - q ** i
    return out


@dataclass
class EmbeddingScan:
    """Hits of an exhaustive scan, as image-code tuples in lexicographic order."""

    domain: Subspace
    n: int
    predicate: str
    candidates: int
    hits: np.ndarray = field(repr=False)

    def maps(self) -> Iterator[SubspaceLinearMap]:
        F = self.domain.field
        for row in self.hits:
            yield SubspaceLinearMap(self.domain, mx.decode(F, row, self.n * self.n))


def _scan_chunk(args):
    domain, n, predicate, prefixes = args
    F = domain.field
    tab = mx.space_tables(F, n)
    add, smul = tab.add_codes, tab.smul_codes
    base = tab.size
    k = domain.dim
    prop, mode = PREDICATES[predicate]
    coeffs = domain.coordinate_tuples()[1:]
    dom_codes = mx.encode(F, domain.elements())[1:]
    if prop is not None:
        dom_prop = {"inv": tab.rank == n, "rank": tab.rank, "det": tab.det,
                    "image": tab.colspace_id if prop == "image" else None}[prop]
        dvals = dom_prop[dom_codes]
        img_prop = dom_prop
    # constrained elements first: they eliminate candidates fastest
    order = np.argsort([0 if (prop == "inv" and dvals[i]) or prop not in (None, "inv") else 1
                        for i in range(len(coeffs))], kind="stable")
    tail = min(k, 2)
    grid = np.indices((base,) * tail).reshape(tail, -1).T
    out = []
    for pre in prefixes:
        ys = np.concatenate([np.broadcast_to(np.asarray(pre, dtype=np.int64), (len(grid), k - tail)),
                             grid], axis=1).astype(np.int64)
        for ei in order:
            c = coeffs[ei]
            acc = np.zeros(len(ys), dtype=np.int64)
            for j in range(k):
                if c[j]:
                    acc = add[acc, smul[c[j], ys[:, j]]]
            ok = acc != 0
            if prop is not None:
                if mode == "implies":
                    ok &= (~dvals[ei]) | img_prop[acc]
                else:
                    ok &= img_prop[acc] == dvals[ei]
            ys = ys[ok]
            if not len(ys):
                break
        out.append(ys)
    return np.concatenate(out) if out else np.zeros((0, k), dtype=np.int64)


def scan_embeddings(domain: Subspace, n: int | None = None, predicate: str = "weak",
                    jobs: int = 1) -> EmbeddingScan:
    """Every injective linear map from ``domain`` into M_n satisfying ``predicate``.

    The candidate space is all tuples of basis images; tuples are processed
    in lexicographic order in chunks sharing a leading prefix, and each
    chunk is filtered element by element.
    """
    n = domain.shape[0] if n is None else n
    if predicate not in PREDICATES:
        raise KeyError(f"unknown predicate {predicate!r}; choose from {sorted(PREDICATES)}")
    F = domain.field
    k = domain.dim
    injective = injective_map_count(F.q, k, n * n)
    if injective > SEARCH_LIMIT:
        raise EnumerationGuardError(
            f"{injective} injective maps from {domain!r} into M_{n} exceed {SEARCH_LIMIT}")
    base = F.q ** (n * n)
    tail = min(k, 2)
    prefixes = list(product(range(base), repeat=k - tail))
    # drop the first coordinate 0 (never injective) cheaply
    if k > tail:
        prefixes = [p for p in prefixes if p[0] != 0]
    from .classify import split_evenly
    if jobs <= 1:
        parts = [_scan_chunk((domain, n, predicate, prefixes))]
    else:
        chunks = split_evenly(prefixes, jobs * 4)
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_scan_chunk, [(domain, n, predicate, c) for c in chunks]))
    hits = np.concatenate(parts) if parts else np.zeros((0, k), dtype=np.int64)
    return EmbeddingScan(domain, n, predicate, injective, hits)


def search_embeddings(domain: Subspace, n: int | None = None, predicate: str = "weak",
                      jobs: int = 1) -> Iterator[SubspaceLinearMap]:
    yield from scan_embeddings(domain, n, predicate, jobs).maps()


# brute-force oracles for structural lemmas ---------------------------------------------------

@dataclass
class Verification:
    name: str
    holds: bool
    details: dict = field(default_factory=dict)


def representation_lemma_oracle(n: int, p: int, r: int, F: FieldTable,
                                V: Subspace | None = None) -> Verification:
    """Every linear phi: V -> M_{n,p} with im phi(M) inside im M is M -> MC.

    Brute force over all q^(dim V * n p) linear maps.
    """
    V = Subspace.full(F, (n, r)) if V is None else V
    k = V.dim
    total = F.q ** (k * n * p)
    if total > MAP_SPACE_LIMIT:
        raise EnumerationGuardError(f"{total} linear maps exceed {MAP_SPACE_LIMIT}")
    dom = mx.space_tables(F, n, r)
    cod = mx.space_tables(F, n, p)
    # inclusion of column spaces, tabulated on distinct subspaces of K^n
    cod_mats = mx.all_vectors(F, n * p).reshape(-1, n, p)
    dom_mats = mx.all_vectors(F, n * r).reshape(-1, n, r)
    cod_rep = {int(i): cod_mats[c] for c, i in enumerate(cod.colspace_id)}
    dom_rep = {int(i): dom_mats[c] for c, i in enumerate(dom.colspace_id)}
    incl = np.zeros((len(cod_rep), len(dom_rep)), dtype=bool)
    for a, A in cod_rep.items():
        for b, B in dom_rep.items():
            incl[a, b] = mx.rank(F, np.hstack([B, A])) == mx.rank(F, B)
    add, smul = cod.add_codes, cod.smul_codes
    maps = np.indices((cod.size,) * k).reshape(k, -1).T[:, ::-1].astype(np.int64)
    coeffs = V.coordinate_tuples()
    dom_ids = dom.colspace_id[mx.encode(F, V.elements())]
    alive = np.ones(len(maps), dtype=bool)
    for c, did in zip(coeffs, dom_ids):
        acc = np.zeros(len(maps), dtype=np.int64)
        for j in range(k):
            if c[j]:
                acc = add[acc, smul[c[j], maps[:, j]]]
        alive &= incl[cod.colspace_id[acc], did]
    survivors = maps[alive]
    right = set()
    for cvec in mx.all_vectors(F, r * p):
        C = cvec.reshape(r, p)
        imgs = mx.matmul(F, V.basis_matrices(), C)
        right.add(tuple(int(x) for x in mx.encode(F, mx.vec(imgs))))
    surv = {tuple(int(x) for x in row) for row in survivors}
    return Verification("representation", surv <= right and bool(surv), {
        "candidates": total,
        "survivors": len(surv),
        "right_multiplications": len(right),
        "survivors_equal_right_multiplications": surv == right,
    })


def add_to_nonsingular_oracle(p: int, F: FieldTable) -> Verification:
    """All A with A + P invertible for every invertible P; expected to be {0}."""
    if p > 3 or F.q > 3:
        raise EnumerationGuardError("oracle limited to p <= 3, q <= 3")
    tab = mx.space_tables(F, p)
    A = mx.all_vectors(F, p * p)
    gl = mx.vec(gl_array(p, F))
    keep = np.arange(len(A))
    block = 64
    for lo in range(0, len(gl), block):
        Ps = gl[lo:lo + block]
        s = F.add_table[A[keep][:, None, :], Ps[None, :, :]]
        ok = tab.invertible[mx.encode(F, s)].all(axis=1)
        keep = keep[ok]
    found = [A[i].reshape(p, p) for i in keep]
    return Verification("add-nonsingular",
                        len(found) == 1 and not found[0].any(),
                        {"satisfying": [mx.format_matrix(m) for m in found],
                         "candidates": len(A), "invertibles": len(gl)})


def centralizer_rank1_criterion(F: FieldTable = GF2, n: int = 3) -> Verification:
    """rank A = 1 iff dim C(A) = 5 and C(A) meets sl_3 only in singular matrices."""
    sl3 = catalog.sl(n, F)
    mats = sl3.elements().reshape(-1, n, n)
    violators, rank1, dim5 = [], 0, 0
    for A in mats:
        lhs = mx.rank(F, A) == 1
        C = centralizer(F, A)
        rhs = C.dim == 5 and count_nonsingular(meet(C, sl3)) == 0
        rank1 += lhs
        dim5 += C.dim == 5
        if lhs != rhs:
            violators.append(mx.format_matrix(A))
    return Verification("centralizer", not violators, {
        "elements": len(mats), "rank1": rank1, "centralizer_dim5": dim5,
        "violators": violators})


def _tr(F, a):
    return mx.trace(F, a)


def trace_form_identities(F: FieldTable = GF2, n: int = 3, maps=None) -> Verification:
    """tr A^3 = det A on sl_3(GF(2)); the polarized cubic form; the ternary identity.

    ``maps`` is a list of callables on matrices (linear on sl_3) tested on
    all basis triples; default is conjugation by every P in GL_3.
    """
    sl3 = catalog.sl(n, F)
    A = sl3.elements().reshape(-1, n, n)
    _, dets = mx.batch_rank_det(F, A)
    cube = _tr(F, mx.matmul(F, mx.matmul(F, A, A), A))
    a_ok = bool(np.all(cube == dets))

    i, j = np.divmod(np.arange(len(A) ** 2), len(A))
    X, Y = A[i], A[j]
    _, dsum = mx.batch_rank_det(F, F.add_table[X, Y])
    b_lhs = F.sub(F.sub(dsum, dets[i]), dets[j])
    X2 = mx.matmul(F, X, X)
    Y2 = mx.matmul(F, Y, Y)
    b_rhs = F.add(_tr(F, mx.matmul(F, X2, Y)), _tr(F, mx.matmul(F, Y2, X)))
    b_ok = bool(np.all(b_lhs == b_rhs))

    if maps is None:
        maps = []
        for P, Pi in zip(gl_array(n, F), gl_inverses(n, F)):
            maps.append(lambda m, P=P, Pi=Pi: mx.matmul(F, mx.matmul(F, P, m), Pi))
    B = sl3.basis_matrices()
    idx = np.array(list(product(range(len(B)), repeat=3)))
    Ba, Bb, Bc = B[idx[:, 0]], B[idx[:, 1]], B[idx[:, 2]]

    def bracket_form(a, b, c):
        br = F.sub(mx.matmul(F, a, b), mx.matmul(F, b, a))
        return _tr(F, mx.matmul(F, br, c))
    ref = bracket_form(Ba, Bb, Bc)
    failing = 0
    for f in maps:
        fB = np.stack([np.asarray(f(b), dtype=np.uint8) for b in B])
        if not np.array_equal(bracket_form(fB[idx[:, 0]], fB[idx[:, 1]], fB[idx[:, 2]]), ref):
            failing += 1
    return Verification("trace-identities", a_ok and b_ok and failing == 0, {
        "cube_equals_det": a_ok, "polarization": b_ok,
        "maps_tested": len(maps), "ternary_failures": failing})


def has_conjugation_form(g: FrobeniusMap) -> bool:
    """QP is a scalar multiple of I, i.e. g is M -> l P M P^{-1} (or with M^T)."""
    F = g.field
    qp = mx.matmul(F, g.Q, g.P)
    lam = qp[0, 0]
    return bool(lam) and np.array_equal(qp, F.mul_table[lam, mx.identity(F, g.n)])
