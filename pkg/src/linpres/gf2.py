"""Packed GF(2) rows: a vector of length <= 64 stored as one integer word.

Bit ``j`` of the word is coordinate ``j``.  Adding two rows is XOR.
"""

from __future__ import annotations

import numpy as np


def pack(vec) -> int:
    word = 0
    for j, v in enumerate(vec):
        if v & 1:
            word |= 1 << j
    return word


def unpack(word: int, width: int) -> np.ndarray:
    return np.array([(word >> j) & 1 for j in range(width)], dtype=np.uint8)


def pack_rows(a) -> list[int]:
    return [pack(row) for row in np.asarray(a)]


def unpack_rows(words, width: int) -> np.ndarray:
    if not len(words):
        return np.zeros((0, width), dtype=np.uint8)
    return np.stack([unpack(w, width) for w in words])


def rank_words(rows, ncols: int) -> int:
    """Rank of a list of packed rows by Gaussian elimination."""
    work = list(rows)
    rank = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = next((i for i in range(rank, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        for i in range(len(work)):
            if i != rank and work[i] & bit:
                work[i] ^= prow
        rank += 1
        if rank == len(work):
            break
    return rank


def rref_words(rows, ncols: int) -> tuple[list[int], list[int]]:
    """Reduced echelon form of packed rows; returns (nonzero rows, pivots)."""
    work = list(rows)
    pivots = []
    rank = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = next((i for i in range(rank, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        for i in range(len(work)):
            if i != rank and work[i] & bit:
                work[i] ^= prow
        pivots.append(col)
        rank += 1
    return work[:rank], pivots


def span_codes(rows) -> np.ndarray:
    """All 2^k combinations of packed rows, in odometer (Gray-built) order.

    ``rows`` may be a 1-D sequence of words or a 2-D integer array of
    shape (N, k), in which case the result has shape (N, 2^k).
    """
    rows = np.asarray(rows, dtype=np.int64)
    single = rows.ndim == 1
    if single:
        rows = rows[None, :]
    n, k = rows.shape
    out = np.zeros((n, 1 << k), dtype=np.int64)
    for m in range(1, 1 << k):
        low = (m & -m).bit_length() - 1
        out[:, m] = out[:, m ^ (1 << low)] ^ rows[:, low]
    return out[0] if single else out
