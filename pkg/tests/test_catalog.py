import itertools

import numpy as np
import pytest

from linpres import catalog
from linpres import matrix as mx
from linpres.field import GF2, make_field
from linpres.subspace import Subspace, is_singular_subspace, meet, trace_orthogonal
from linpres.action import hyperplane_orbit


def param_set(fn, k):
    return {tuple(np.asarray(fn(*c), dtype=np.uint8).ravel() % 2)
            for c in itertools.product(range(2), repeat=k)}


DISPLAYED = {
    "J3": (catalog.J3_F2, 5, lambda a, b, c, d, e: [[a, 0, 0], [c, b, 0], [d, e, a + b]]),
    "V1": (catalog.V1_F2, 8, lambda a, b, c, d, e, f, g, h: [[a, b, c], [d, e, f], [g, h, 0]]),
    "V2": (catalog.V2_F2, 8, lambda a, b, c, d, e, f, g, h: [[a, b, c], [d, a, e], [f, g, h]]),
    "F": (catalog.F_cal, 5, lambda a, b, c, d, e: [[0, 0, a], [0, 0, b], [c, d, e]]),
    "G": (catalog.G_cal, 5, lambda a, b, c, d, e: [[0, a, c], [0, 0, b], [a + b, d, e]]),
}


@pytest.mark.parametrize("name", sorted(DISPLAYED))
def test_matches_displayed_parametrization(name):
    ctor, k, fn = DISPLAYED[name]
    S = ctor()
    assert S.dim == k
    assert {tuple(v) for v in S.elements()} == param_set(fn, k)


def test_sl_T_H_parametrizations_gf2():
    sl3 = catalog.sl(3, GF2)
    want = {tuple(v) for v in mx.all_vectors(GF2, 9) if mx.trace(GF2, v.reshape(3, 3)) == 0}
    assert {tuple(v) for v in sl3.elements()} == want
    T2 = catalog.T_upper(2, GF2)
    assert {tuple(v) for v in T2.elements()} == param_set(lambda a, b, c: [[a, b], [0, c]], 3)
    H3 = catalog.H(3, GF2)
    assert {tuple(v) for v in H3.elements()} == param_set(
        lambda a, b, c, d, e, f, g: [[a, b, c], [d, e, f], [0, 0, g]], 7)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_dims(q):
    F = make_field(q)
    for n in (2, 3):
        assert catalog.sl(n, F).dim == n * n - 1
        assert catalog.H(n, F).dim == n * n - n + 1
        assert catalog.T_upper(n, F).dim == n * (n + 1) // 2
    sl3 = catalog.sl(3, F)
    for v in sl3.basis:
        assert mx.trace(F, v.reshape(3, 3)) == 0


def test_md_examples():
    F = GF2
    e3 = catalog.M_D([0, 0, 1], F)
    assert e3.dim == 6 and e3.codim == 3
    assert catalog.M_sup_D([0, 0, 1], F) == e3.transpose()
    assert meet(e3, catalog.M_sup_D([1, 0, 0], F)).dim == 4
    assert is_singular_subspace(e3)
    for M in e3.elements().reshape(-1, 3, 3):
        assert not M[:, 2].any()


@pytest.mark.parametrize("q", [2, 3])
def test_md_is_kernel_condition(q):
    F = make_field(q)
    x = np.array([1, 2 % q, 1], dtype=np.uint8)
    S = catalog.M_D(x, F)
    want = {tuple(v) for v in mx.all_vectors(F, 9)
            if not mx.matmul(F, v.reshape(3, 3), x[:, None]).any()}
    assert {tuple(v) for v in S.elements()} == want


def test_R_block_space():
    F = GF2
    R11 = catalog.R(1, 1, 3, 3, F)
    assert R11.dim == 5 and is_singular_subspace(R11)
    assert catalog.R(3, 3, 3, 3, F) == Subspace.full(F, (3, 3))
    assert catalog.R(0, 0, 3, 4, F).dim == 0
    for s, t, n, p in [(1, 2, 3, 4), (2, 1, 4, 3), (0, 2, 2, 3)]:
        assert catalog.R(s, t, n, p, F).dim == s * t + s * (p - t) + (n - s) * t
    with pytest.raises(ValueError):
        catalog.R(4, 0, 3, 3, F)


def test_F_G_inside_V2_and_singular():
    V2 = catalog.V2_F2()
    for S in (catalog.F_cal(), catalog.G_cal()):
        assert S <= V2 and S.dim == 5 and is_singular_subspace(S)


def test_wrong_field():
    F3 = make_field(3)
    for ctor in (catalog.J3_F2, catalog.V1_F2, catalog.V2_F2, catalog.F_cal, catalog.G_cal):
        with pytest.raises(catalog.WrongFieldError):
            ctor(F3)


def test_hyperplane_orthogonals_are_lines():
    F = GF2
    for V in (catalog.sl(3, F), catalog.V1_F2(), catalog.V2_F2(), catalog.sl(2, make_field(3))):
        assert V.codim == 1 and trace_orthogonal(V).dim == 1
    assert hyperplane_orbit(catalog.sl(3, F)) == 3
    assert hyperplane_orbit(catalog.V1_F2()) == 1
    assert hyperplane_orbit(catalog.V2_F2()) == 2


@pytest.mark.parametrize("name,dim", [("sl3", 8), ("v1", 8), ("v2", 8), ("j3", 5), ("f", 5),
                                      ("g", 5), ("t2+", 3), ("h_n", 7), ("h_4", 13), ("m2", 4),
                                      ("m_d:0,0,1", 6), ("m^d:1,1,0", 6), ("r:1,1", 5)])
def test_name_registry(name, dim):
    assert catalog.space_from_name(name, GF2).dim == dim


def test_name_registry_unknown():
    with pytest.raises(KeyError):
        catalog.space_from_name("nonsense", GF2)
