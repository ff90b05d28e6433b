from collections import Counter

import numpy as np
import pytest

from linpres import catalog
from linpres import matrix as mx
from linpres.action import FrobeniusMap, act, apply_frobenius, gl_array
from linpres.classify import (CensusTally, Kind, _census_chunk, census_5dim_singular,
                              census_inside, classify_singular, common_coimage_line,
                              common_kernel, common_kernel_line, intersection_dim_table,
                              split_evenly)
from linpres.field import GF2, make_field
from linpres.subspace import EnumerationGuardError, meet, pivot_patterns, span

from oracles import gaussian_binomial


def test_line_tests():
    F = GF2
    D = common_kernel_line(catalog.M_D([0, 0, 1], F))
    assert D.basis.tolist() == [[0, 0, 1]]
    assert common_kernel(catalog.M_D([0, 0, 1], F)).dim == 1
    assert common_kernel_line(catalog.J3_F2()) is None
    R11 = catalog.R(1, 1, 3, 3, F)
    assert common_kernel_line(R11) is None and common_coimage_line(R11) is None


def test_classify_examples():
    F = GF2
    assert classify_singular(catalog.F_cal()).kind is Kind.FIRST
    assert classify_singular(catalog.G_cal()).kind is Kind.SECOND
    v = classify_singular(meet(catalog.V2_F2(), catalog.M_D([0, 0, 1], F)))
    assert v.kind is Kind.M_D and v.unique_line
    assert v.witness.basis.tolist() == [[0, 0, 1]]
    v = classify_singular(meet(catalog.V2_F2(), catalog.M_sup_D([1, 0, 0], F)))
    assert v.kind is Kind.M_SUP_D


def test_first_kind_witness_is_valid():
    F = GF2
    v = classify_singular(catalog.F_cal())
    P, Q = v.witness
    assert act(P, Q, catalog.F_cal()) == catalog.R(1, 1, 3, 3, F)


def test_preconditions():
    F = GF2
    with pytest.raises(ValueError):
        classify_singular(catalog.V2_F2())
    with pytest.raises(ValueError):
        classify_singular(catalog.sl(3, F))
    gens = [mx.vec(mx.identity(F, 3))] + [mx.vec(mx.elementary(3, 0, j)) for j in (1, 2)] + \
        [mx.vec(mx.elementary(3, 1, 0)), mx.vec(mx.elementary(3, 2, 0))]
    with pytest.raises(ValueError):
        classify_singular(span(F, gens, (3, 3)))


def test_kind_is_orbit_invariant():
    F = GF2
    rng = np.random.default_rng(33)
    G = gl_array(3, F)
    swap = {Kind.M_D: Kind.M_SUP_D, Kind.M_SUP_D: Kind.M_D}
    for S, v in census_inside(catalog.V2_F2(), 5):
        for _ in range(3):
            g = FrobeniusMap(G[rng.integers(168)], G[rng.integers(168)], False, F)
            assert classify_singular(apply_frobenius(g, S)).kind is v.kind
        t = classify_singular(S.transpose()).kind
        assert t is swap.get(v.kind, v.kind)


def test_census_inside_v2():
    found = census_inside(catalog.V2_F2(), 5)
    kinds = [v.kind for _, v in found]
    assert len(found) == 18
    assert kinds.count(Kind.M_D) + kinds.count(Kind.M_SUP_D) == 14
    assert kinds.count(Kind.FIRST) == 1 and kinds.count(Kind.SECOND) == 3
    assert [s for s, v in found if v.kind is Kind.FIRST] == [catalog.F_cal()]


def test_second_kind_in_v2_are_conjugates_of_G():
    F = GF2
    seconds = {s for s, v in census_inside(catalog.V2_F2(), 5) if v.kind is Kind.SECOND}
    conj = set()
    for P in gl_array(2, F):
        B = mx.identity(F, 3)
        B[:2, :2] = P
        conj.add(act(B, B, catalog.G_cal()))
    assert seconds == conj and len(conj) == 3


def test_census_inside_sl3_has_no_first_kind():
    found = census_inside(catalog.sl(3, GF2), 5)
    assert all(v.kind is not Kind.FIRST for _, v in found)
    assert all(v.kind is not Kind.UNCLASSIFIED for _, v in found)


def test_census_inside_guard():
    with pytest.raises(EnumerationGuardError):
        census_inside(catalog.full_space(4, make_field(3)), 8)
    with pytest.raises(EnumerationGuardError):
        census_inside(catalog.full_space(3, make_field(3)), 4)


def test_intersection_table_examples():
    F = GF2
    v2 = catalog.V2_F2()
    V = meet(v2, catalog.M_D([0, 0, 1], F))
    W = meet(v2, catalog.M_D([0, 1, 1], F))
    U = meet(v2, catalog.M_D([1, 0, 0], F))
    t = intersection_dim_table([V, W, U, catalog.F_cal()])
    assert t[0, 1] == 2 and t[2, 3] == 4
    assert list(np.diag(t)) == [5, 5, 5, 5]
    assert np.array_equal(t, t.T)


def test_claim_dichotomy_on_table():
    F = GF2
    found = census_inside(catalog.V2_F2(), 5)
    spaces = [s for s, _ in found]
    kinds = [v.kind for _, v in found]
    t = intersection_dim_table(spaces)
    for i, (S, k) in enumerate(zip(spaces, kinds)):
        others = np.delete(t[i], i)
        if k in (Kind.M_D, Kind.M_SUP_D):
            line = (common_kernel_line if k is Kind.M_D else common_coimage_line)(S).basis[0]
            x_type = bool(line[2])
        else:
            x_type = False
        if x_type:
            assert others.max() <= 3
            dual = Kind.M_SUP_D if k is Kind.M_D else Kind.M_D
            threes = {j for j in range(18) if j != i and t[i, j] == 3}
            assert threes == {j for j in range(18) if kinds[j] is dual}
        else:
            assert 4 in others


def test_tally_merge_is_associative():
    a = CensusTally(3, 1, Counter({Kind.M_D: 1}))
    b = CensusTally(5, 2, Counter({Kind.FIRST: 2}), 1)
    c = CensusTally(1, 0)
    assert a.merge(b).merge(c).as_dict() == a.merge(b.merge(c)).as_dict()
    assert a.merge(CensusTally()).as_dict() == a.as_dict()


# a slice of the pivot patterns that still produces every kind
PATTERNS = pivot_patterns(9, 5)[40:70]


@pytest.fixture(scope="module")
def slice_reference():
    return _census_chunk(PATTERNS).as_dict()


@pytest.mark.parametrize("parts", [2, 7, 30])
def test_partition_independence(parts, slice_reference):
    total = CensusTally()
    for chunk in split_evenly(PATTERNS, parts):
        total = total.merge(_census_chunk(chunk))
    assert total.as_dict() == slice_reference
    assert all(slice_reference["kinds"][k] for k in ("M_D", "M^D", "first-kind", "second-kind"))


def test_parallel_matches_serial(slice_reference):
    assert census_5dim_singular(jobs=2, patterns=PATTERNS).as_dict() == slice_reference


def test_small_dim_counts():
    assert census_5dim_singular(dim=1).subspaces == gaussian_binomial(9, 1, 2) == 511


def test_split_evenly():
    items = list(range(10))
    chunks = split_evenly(items, 3)
    assert [x for c in chunks for x in c] == items and [len(c) for c in chunks] == [4, 3, 3]
    assert split_evenly([], 4) == []
