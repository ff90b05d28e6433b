"""Classification of 5-dimensional singular subspaces of M_3(GF(2)).

Every such subspace is contained in some M_D, or in some M^D, or is
equivalent to R(1,1) (first kind), or to J_3(GF(2)) (second kind).  The
classifier runs the cheap structural tests first and the orbit searches
last; a subspace passing none, or more than one, test is reported as
``UNCLASSIFIED`` rather than raising.
"""

from __future__ import annotations

import enum
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .field import GF2, FieldTable
from . import catalog, gf2
from . import matrix as mx
from .action import are_equivalent
from .subspace import (Subspace, kernel_subspace, meet, pivot_patterns,
                       rref_batch, is_singular_subspace)


class Kind(str, enum.Enum):
    M_D = "M_D"
    M_SUP_D = "M^D"
    FIRST = "first-kind"
    SECOND = "second-kind"
    UNCLASSIFIED = "unclassified"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ClassificationVerdict:
    kind: Kind
    witness: object = None
    unique_line: bool | None = None
    note: str = ""


def common_kernel(S: Subspace) -> Subspace:
    """{x : M x = 0 for every M in S}."""
    n, p = S.shape
    stacked = S.basis_matrices().reshape(-1, p)
    if not stacked.shape[0]:
        return Subspace.full(S.field, p)
    return kernel_subspace(S.field, stacked, p)


def common_coimage(S: Subspace) -> Subspace:
    """{x : x^T M = 0 for every M in S}, the orthogonal of the sum of images."""
    return common_kernel(S.transpose())


def _first_line(W: Subspace):
    if not W.dim:
        return None
    return Subspace(W.field, W.shape, W.basis[:1], canonical=True)


def common_kernel_line(S: Subspace):
    """A line D with S inside M_D, or None.  Unique iff common_kernel(S) is a line."""
    return _first_line(common_kernel(S))


def common_coimage_line(S: Subspace):
    """A line D with S inside M^D, or None."""
    return _first_line(common_coimage(S))


@lru_cache(maxsize=None)
def _references(F: FieldTable):
    return catalog.R(1, 1, 3, 3, F), catalog.J3_F2(F)


def classify_singular(S: Subspace, *, check: bool = True) -> ClassificationVerdict:
    if check:
        if S.field.q != 2 or S.shape != (3, 3) or S.dim != 5:
            raise ValueError(f"expected a 5-dimensional subspace of M_3(GF(2)), got {S!r}")
        if not is_singular_subspace(S):
            raise ValueError("subspace contains an invertible matrix")
    ker = common_kernel(S)
    coim = common_coimage(S)
    if ker.dim and coim.dim:
        return ClassificationVerdict(Kind.UNCLASSIFIED, (ker, coim),
                                     note="contained in both some M_D and some M^D")
    if ker.dim:
        return ClassificationVerdict(Kind.M_D, _first_line(ker), ker.dim == 1)
    if coim.dim:
        return ClassificationVerdict(Kind.M_SUP_D, _first_line(coim), coim.dim == 1)
    r11, j3 = _references(S.field)
    first = are_equivalent(S, r11)
    second = are_equivalent(S, j3)
    if first is not None and second is not None:
        return ClassificationVerdict(Kind.UNCLASSIFIED, (first, second),
                                     note="equivalent to both R(1,1) and J3")
    if first is not None:
        return ClassificationVerdict(Kind.FIRST, first)
    if second is not None:
        return ClassificationVerdict(Kind.SECOND, second)
    return ClassificationVerdict(Kind.UNCLASSIFIED, None, note="no test fired")


# census of M_3(GF(2)) -------------------------------------------------------------

@dataclass
class CensusTally:
    """Mergeable per-partition census result."""

    subspaces: int = 0
    singular: int = 0
    kinds: Counter = field(default_factory=Counter)
    non_unique_lines: int = 0
    unclassified: list = field(default_factory=list)

    def merge(self, other: "CensusTally") -> "CensusTally":
        return CensusTally(self.subspaces + other.subspaces,
                           self.singular + other.singular,
                           self.kinds + other.kinds,
                           self.non_unique_lines + other.non_unique_lines,
                           self.unclassified + other.unclassified)

    def as_dict(self) -> dict:
        return {
            "subspaces": self.subspaces,
            "singular": self.singular,
            "kinds": {k.value: self.kinds.get(k, 0) for k in Kind},
            "non_unique_lines": self.non_unique_lines,
            "unclassified": [list(map(int, b)) for b in self.unclassified],
        }


_BLOCK = 1 << 16


def _invertible_mask_m3f2() -> np.ndarray:
    return mx.space_tables(GF2, 3).invertible


def singular_bases_gf2(pivots, d: int = 9) -> tuple[int, np.ndarray]:
    """Packed RREF bases (rows as 9-bit words) of the singular subspaces with these pivots.

    Works on the packed path: each subspace's 2^k elements are XOR
    combinations of its rows, looked up in the invertibility table of
    M_3(GF(2)).  Returns (number of subspaces scanned, singular bases).
    """
    inv = _invertible_mask_m3f2()
    rows = rref_batch(GF2, pivots, d)
    words = mx.encode(GF2, rows)
    hits = []
    for lo in range(0, len(words), _BLOCK):
        w = words[lo:lo + _BLOCK]
        elems = gf2.span_codes(w)
        sing = ~inv[elems[:, 1:]].any(axis=1)
        hits.append(w[sing])
    return len(words), np.concatenate(hits) if hits else np.zeros((0, len(pivots)), np.int64)


def _census_chunk(patterns) -> CensusTally:
    tally = CensusTally()
    for piv in patterns:
        scanned, bases = singular_bases_gf2(piv)
        tally.subspaces += scanned
        tally.singular += len(bases)
        for b in bases:
            S = Subspace(GF2, (3, 3), gf2.unpack_rows([int(x) for x in b], 9), canonical=True)
            v = classify_singular(S, check=False)
            tally.kinds[v.kind] += 1
            if v.unique_line is False:
                tally.non_unique_lines += 1
            if v.kind is Kind.UNCLASSIFIED:
                tally.unclassified.append(tuple(int(x) for x in b))
    return tally


def split_evenly(items, parts: int) -> list:
    parts = max(1, parts)
    k, r = divmod(len(items), parts)
    out, lo = [], 0
    for i in range(parts):
        hi = lo + k + (1 if i < r else 0)
        out.append(items[lo:hi])
        lo = hi
    return [c for c in out if c]


def census_5dim_singular(jobs: int = 1, dim: int = 5, patterns=None) -> CensusTally:
    """Enumerate every dim-dimensional subspace of M_3(GF(2)) and classify the singular ones.

    The pivot-pattern stream (or the given sub-list of it) is split into
    ``jobs`` contiguous chunks; the merged tally does not depend on the split.
    """
    patterns = pivot_patterns(9, dim) if patterns is None else list(patterns)
    chunks = split_evenly(patterns, jobs)
    if jobs <= 1:
        results = [_census_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_census_chunk, chunks))
    total = CensusTally()
    for r in results:
        total = total.merge(r)
    return total


def census_inside(V: Subspace, k: int) -> list[tuple[Subspace, ClassificationVerdict | None]]:
    """All singular k-dimensional subspaces of V, classified when V lies in M_3(GF(2)) and k = 5."""
    from .subspace import _check_guard, ELEMENT_LIMIT, EnumerationGuardError
    F = V.field
    total = _check_guard(V.dim, k, F.q)
    if total > ELEMENT_LIMIT:
        raise EnumerationGuardError(
            f"{total} subspaces of dimension {k} exceed the guard {ELEMENT_LIMIT}")
    n = V.shape[0]
    tab = mx.space_tables(F, n)
    combos = mx.all_vectors(F, k)
    classifiable = F.q == 2 and V.shape == (3, 3) and k == 5
    out = []
    for piv in pivot_patterns(V.dim, k):
        coords = rref_batch(F, piv, V.dim)
        bases = mx.matmul(F, coords, V.basis)
        elems = mx.matmul(F, combos[None], bases)
        sing = ~tab.invertible[mx.encode(F, elems)].any(axis=1)
        for b in bases[sing]:
            S = Subspace(F, V.shape, b)
            out.append((S, classify_singular(S, check=False) if classifiable else None))
    return out


def intersection_dim_table(spaces) -> np.ndarray:
    m = len(spaces)
    out = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        out[i, i] = spaces[i].dim
        for j in range(i + 1, m):
            out[i, j] = out[j, i] = meet(spaces[i], spaces[j]).dim
    return out
