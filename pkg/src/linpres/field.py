"""Table-backed arithmetic in the small finite fields GF(q), q <= 9.

Elements are integers ``0..q-1``.  For a prime field the integer is the
residue; for GF(p^e) it is the coefficient vector of a polynomial in ``x``
read as base-p digits, constant term first (so in GF(4), ``2`` is ``x`` and
``3`` is ``x + 1``).

Every operation is a lookup in a precomputed table, so the same functions
accept plain ints and numpy integer arrays alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)

# Irreducible moduli, low degree coefficient first (monic leading 1 implied).
MODULI = {
    4: (2, (1, 1)),      # x^2 + x + 1
    8: (2, (1, 1, 0)),   # x^3 + x + 1
    9: (3, (1, 0)),      # x^2 + 1
}


class UnsupportedFieldError(ValueError):
    pass


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FieldTable:
    q: int
    p: int
    degree: int
    modulus: tuple | None
    add_table: np.ndarray = field(repr=False)
    mul_table: np.ndarray = field(repr=False)
    neg_table: np.ndarray = field(repr=False)
    inv_table: np.ndarray = field(repr=False)

    # scalar / array arithmetic --------------------------------------------

    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_table[a]

    def reduce_add(self, a, axis=-1):
        """Field sum of ``a`` along ``axis``.

        Addition in GF(p^e) is digit-wise addition mod p on the encoding,
        so each base-p digit is summed with integer arithmetic.
        """
        a = np.asarray(a, dtype=np.int64)
        if self.degree == 1:
            return (a.sum(axis=axis) % self.p).astype(np.uint8)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis).astype(np.uint8)
        out = 0
        scale = 1
        for _ in range(self.degree):
            out = out + scale * ((a % self.p).sum(axis=axis) % self.p)
            a = a // self.p
            scale *= self.p
        return np.asarray(out).astype(np.uint8)

    @property
    def elements(self):
        return range(self.q)

    @property
    def nonzero(self):
        return range(1, self.q)

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (make_field, (self.q,))


def _poly_mulmod(a, b, p, e, modulus):
    da = [(a // p**i) % p for i in range(e)]
    db = [(b // p**i) % p for i in range(e)]
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    # x^e = -(modulus low coefficients)
    for k in range(2 * e - 2, e - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i, m in enumerate(modulus):
                prod[k - e + i] = (prod[k - e + i] - c * m) % p
    return sum(c * p**i for i, c in enumerate(prod[:e]))


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldTable:
    """Return the table-backed field with ``q`` elements."""
    if q not in SUPPORTED_ORDERS:
        raise UnsupportedFieldError(
            f"GF({q}) is not supported; choose q in {SUPPORTED_ORDERS}")
    if q in MODULI:
        p, modulus = MODULI[q]
        e = len(modulus)
    else:
        p, modulus, e = q, None, 1

    add = np.zeros((q, q), dtype=np.uint8)
    mul = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            add[a, b] = sum(
                (((a // p**i) + (b // p**i)) % p) * p**i for i in range(e))
            if e == 1:
                mul[a, b] = (a * b) % p
            else:
                mul[a, b] = _poly_mulmod(a, b, p, e, modulus)
    neg = np.array([int(np.flatnonzero(add[a] == 0)[0]) for a in range(q)],
                   dtype=np.uint8)
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
    return FieldTable(q, p, e, modulus, _readonly(add), _readonly(mul),
                      _readonly(neg), _readonly(inv))


GF2 = make_field(2)
