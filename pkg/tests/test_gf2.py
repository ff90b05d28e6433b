import numpy as np
from hypothesis import given, settings, strategies as st

from linpres import gf2
from linpres import matrix as mx
from linpres.field import GF2

from oracles import PyField, py_rank


def test_pack_roundtrip():
    v = np.array([1, 0, 1, 1, 0], dtype=np.uint8)
    w = gf2.pack(v)
    assert w == 0b01101
    assert np.array_equal(gf2.unpack(w, 5), v)
    rows = np.array([[1, 0, 0], [0, 1, 1]], dtype=np.uint8)
    assert np.array_equal(gf2.unpack_rows(gf2.pack_rows(rows), 3), rows)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 2 ** 20 - 1), min_size=0, max_size=12))
def test_rank_words_matches_oracle(words):
    rows = gf2.unpack_rows(words, 20) if words else np.zeros((0, 20), np.uint8)
    want = py_rank(PyField(2), rows) if words else 0
    assert gf2.rank_words(words, 20) == want


def test_rref_words_matches_generic():
    rng = np.random.default_rng(0)
    for _ in range(30):
        m = rng.integers(0, 2, size=(5, 9), dtype=np.uint8)
        rows, piv = gf2.rref_words(gf2.pack_rows(m), 9)
        r, p = mx.rref(GF2, m)
        assert list(piv) == list(p)
        assert np.array_equal(gf2.unpack_rows(rows, 9), r[:len(p)])


def test_span_codes_enumerates_span():
    rows = [0b001, 0b110]
    codes = gf2.span_codes(rows)
    assert sorted(codes.tolist()) == [0, 1, 6, 7]
    batch = gf2.span_codes(np.array([[1, 2], [4, 3]]))
    assert batch.shape == (2, 4)
    assert sorted(batch[1].tolist()) == [0, 3, 4, 7]
