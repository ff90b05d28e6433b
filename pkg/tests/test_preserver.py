import itertools

import numpy as np
import pytest

from linpres import catalog, preserver as pr
from linpres import matrix as mx
from linpres.action import FrobeniusMap, frobenius_table, gl_array
from linpres.field import GF2, make_field
from linpres.subspace import EnumerationGuardError, Subspace, enumerate_subspaces, span

from oracles import PyField, py_det, py_rank


def random_frobenius(F, n, rng):
    G = gl_array(n, F)
    return FrobeniusMap(G[rng.integers(len(G))], G[rng.integers(len(G))], bool(rng.integers(2)), F)


def test_map_basics():
    F = make_field(3)
    V = catalog.T_upper(2, F)
    f = pr.SubspaceLinearMap.from_function(V, lambda m: m.T.copy())
    for m in V.elements().reshape(-1, 2, 2):
        assert np.array_equal(f(m), m.T)
    assert f.is_injective()
    zero = pr.SubspaceLinearMap(V, np.zeros((3, 4), np.uint8))
    assert not zero.is_injective()
    with pytest.raises(ValueError):
        pr.SubspaceLinearMap(V, np.eye(4, dtype=np.uint8)[:3], codomain=V)


def test_map_fixture_roundtrip():
    V = catalog.T_upper(2, GF2)
    f = pr.SubspaceLinearMap.from_function(V, lambda m: m)
    text = pr.format_map(f)
    assert text.splitlines()[0] == "0: 1 0; 0 0"
    assert pr.parse_map(text, V) == f
    with pytest.raises(ValueError):
        pr.parse_map("0: 1 0; 0 0", V)


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (4, 2)])
def test_frobenius_restrictions_are_strong(q, n):
    F = make_field(q)
    rng = np.random.default_rng(q)
    for _ in range(10):
        k = int(rng.integers(1, n * n))
        V = span(F, rng.integers(0, q, size=(k, n * n), dtype=np.uint8), (n, n))
        g = random_frobenius(F, n, rng)
        f = pr.SubspaceLinearMap.restriction(g, V)
        assert pr.is_strong_preserver(f) and pr.is_weak_preserver(f)
        assert pr.is_rank_preserver(f) and pr.is_det_preserver(f) == (
            pr.is_det_preserver(f))


@pytest.mark.parametrize("method", ["scan", "solve"])
def test_extension_recovers_restriction(method):
    F = GF2
    rng = np.random.default_rng(8)
    for _ in range(6):
        V = span(F, rng.integers(0, 2, size=(5, 9), dtype=np.uint8), (3, 3))
        g = random_frobenius(F, 3, rng)
        f = pr.SubspaceLinearMap.restriction(g, V)
        h = pr.frobenius_extension(f, method)
        assert h is not None
        # agreement on every element of the domain, not only the basis
        elems = V.elements().reshape(-1, 3, 3)
        assert np.array_equal(h(elems), g(elems))


def test_extension_full_space_same_action():
    F = make_field(3)
    rng = np.random.default_rng(4)
    g = random_frobenius(F, 2, rng)
    h = pr.frobenius_extension(pr.SubspaceLinearMap.restriction(g, Subspace.full(F, (2, 2))))
    assert h.same_action(g)


def test_phi_counterexample():
    phi = pr.phi_counterexample(3, GF2)
    assert len(phi.domain.elements()) == 128
    assert pr.is_strong_preserver(phi)
    assert not pr.is_rank_preserver(phi)
    m, a, b = pr.rank_witness(phi)
    emb = mx.zeros(3)
    emb[1, 1] = 1
    assert np.array_equal(m, emb) and (a, b) == (1, 2)
    assert mx.rank(GF2, phi(emb)) == 2
    assert pr.frobenius_extension(phi, "scan") is None
    assert pr.frobenius_extension(phi, "solve") is None
    with pytest.raises(ValueError):
        pr.phi_counterexample(2, GF2)


def test_phi_gf3():
    phi = pr.phi_counterexample(3, make_field(3))
    assert pr.is_strong_preserver(phi) and not pr.is_rank_preserver(phi)
    assert pr.frobenius_extension(phi, "solve") is None


def test_phi_n4_solve_route():
    # M_4(GF(2)) is beyond the scan guard; the solve route still decides it
    phi = pr.phi_counterexample(4, GF2)
    with pytest.raises(EnumerationGuardError):
        pr.frobenius_extension(phi, "scan")
    assert pr.frobenius_extension(phi) is None


def test_alphabeta_counterexample():
    f = pr.alphabeta_counterexample()
    assert len(f.domain.elements()) == 256
    assert f.is_injective()
    assert pr.is_det_preserver(f)
    assert pr.alphabeta_identity() == []
    assert pr.frobenius_extension(f, "scan") is None
    assert pr.frobenius_extension(f, "solve") is None
    ref = PyField(2)
    for m in f.domain.elements().reshape(-1, 3, 3):
        assert py_det(ref, f(m)) == py_det(ref, m)


def test_alpha_beta_displayed():
    assert pr.alpha([1, 1]).tolist() == [[0, 0], [1, 0]]
    assert pr.beta([1, 0]).tolist() == [[0, 0], [1, 0]]
    assert pr.beta([0, 1]).tolist() == [[0, 0], [0, 0]]


def test_det_iff_strong_over_gf2():
    maps = [pr.phi_counterexample(3, GF2), pr.alphabeta_counterexample()]
    scan = pr.scan_embeddings(catalog.T_upper(2, GF2), 2, "any")
    maps += list(scan.maps())[::37]
    for f in maps:
        assert pr.is_det_preserver(f) == pr.is_strong_preserver(f)


def test_injective_count_t2():
    scan = pr.scan_embeddings(catalog.T_upper(2, GF2), 2, "any")
    assert len(scan.hits) == scan.candidates == 2520 == 15 * 14 * 12


def test_scan_against_direct_predicates():
    F = GF2
    V = catalog.T_upper(2, F)
    allmaps = list(pr.scan_embeddings(V, 2, "any").maps())
    for pred, fn in [("weak", pr.is_weak_preserver), ("strong", pr.is_strong_preserver),
                     ("det", pr.is_det_preserver), ("rank", pr.is_rank_preserver),
                     ("image", pr.is_image_preserver)]:
        want = [f.images.tolist() for f in allmaps if fn(f)]
        got = [f.images.tolist() for f in pr.scan_embeddings(V, 2, pred).maps()]
        assert got == want, pred


def test_scan_partition_independence():
    V = catalog.sl(2, make_field(3))
    a = pr.scan_embeddings(V, 2, "weak", jobs=1).hits
    b = pr.scan_embeddings(V, 2, "weak", jobs=2).hits
    assert np.array_equal(a, b)
    codes = [tuple(r) for r in a]
    assert codes == sorted(codes)


def test_scan_guard():
    with pytest.raises(EnumerationGuardError):
        pr.scan_embeddings(Subspace.full(make_field(4), (2, 2)), 2, "weak")
    with pytest.raises(KeyError):
        pr.scan_embeddings(catalog.T_upper(2, GF2), 2, "nope")


def test_t2_weak_nonextendable_exists_gf2():
    V = catalog.T_upper(2, GF2)
    idx = pr.ExtensionIndex(V)
    hits = pr.scan_embeddings(V, 2, "weak")
    bad = [f for f in hits.maps() if not idx.extends(mx.encode(GF2, f.images))]
    assert bad
    assert pr.frobenius_extension(bad[0], "solve") is None


@pytest.mark.parametrize("q", [2, 3])
def test_sl2_weak_preservers_extend(q):
    F = make_field(q)
    V = catalog.sl(2, F)
    idx = pr.ExtensionIndex(V)
    hits = pr.scan_embeddings(V, 2, "weak")
    assert len(hits.hits)
    assert all(idx.extends(h) for h in hits.hits)


def test_sl2_f3_automorphisms_are_conjugation_and_scale():
    F = make_field(3)
    V = catalog.sl(2, F)
    idx = pr.ExtensionIndex(V)
    autos = [f for f in pr.scan_embeddings(V, 2, "weak").maps() if f.image_subspace() == V]
    assert autos
    for f in autos:
        g = idx.find(mx.encode(F, f.images))
        assert g is not None and not g.transposed and pr.has_conjugation_form(g)


def test_strong_hyperplanes_extend_gf2():
    F = GF2
    for V in enumerate_subspaces(4, 3, F, shape=(2, 2)):
        idx = pr.ExtensionIndex(V)
        scan = pr.scan_embeddings(V, 2, "strong")
        assert all(idx.extends(h) for h in scan.hits)
        # cross-check the lookup with the independent solve route on a few hits
        for f in list(scan.maps())[::50]:
            g = pr.frobenius_extension(f, "solve")
            assert g is not None
            elems = V.elements().reshape(-1, 2, 2)
            assert np.array_equal(g(elems), f.image_vectors().reshape(-1, 2, 2))


def test_representation_oracle():
    rec = pr.representation_lemma_oracle(2, 2, 2, GF2)
    assert rec.holds
    assert rec.details["candidates"] == 2 ** 16
    assert rec.details["survivors"] == 16
    assert rec.details["survivors_equal_right_multiplications"]


def test_representation_count_second_route():
    F = GF2
    V = Subspace.full(F, (2, 2))
    M = V.elements().reshape(-1, 2, 2)
    coeffs = V.coordinate_tuples()
    maps = mx.all_vectors(F, 16).reshape(-1, 4, 4)
    img = mx.matmul(F, coeffs[None], maps).reshape(len(maps), 16, 2, 2)
    both = np.concatenate([np.broadcast_to(M, img.shape), img], axis=-1)
    rb, _ = mx.batch_rank_det(F, both.reshape(-1, 2, 4))
    rm, _ = mx.batch_rank_det(F, M)
    ok = (rb.reshape(len(maps), 16) == rm[None]).all(axis=1)
    survivors = maps[ok]
    assert len(survivors) == 16
    # zero and identity are among them
    assert any(not s.any() for s in survivors)
    assert any(np.array_equal(s, V.basis) for s in survivors)


@pytest.mark.parametrize("p,q", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_add_to_nonsingular(p, q):
    rec = pr.add_to_nonsingular_oracle(p, make_field(q))
    assert rec.holds and rec.details["satisfying"] == [mx.format_matrix(np.zeros((p, p), np.uint8))]


def test_add_to_nonsingular_pure_python():
    ref = PyField(2)
    mats = [np.array(b, dtype=np.uint8).reshape(2, 2) for b in itertools.product(range(2), repeat=4)]
    gl = [m for m in mats if py_det(ref, m)]
    assert len(gl) == 6
    good = [A for A in mats if all(py_det(ref, (A + P) % 2) for P in gl)]
    assert len(good) == 1 and not good[0].any()


def test_add_to_nonsingular_guard():
    with pytest.raises(EnumerationGuardError):
        pr.add_to_nonsingular_oracle(4, GF2)


def test_centralizer_criterion_and_examples():
    F = GF2
    rec = pr.centralizer_rank1_criterion(F, 3)
    assert rec.holds and rec.details["elements"] == 256
    assert rec.details["rank1"] == 21
    from linpres.subspace import centralizer, count_nonsingular, meet
    sl3 = catalog.sl(3, F)
    A = mx.elementary(3, 0, 2)
    assert mx.centralizer_dim(F, A) == 5
    assert count_nonsingular(meet(centralizer(F, A), sl3)) == 0
    B = mx.as_matrix(F, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    assert mx.centralizer_dim(F, B) == 5
    N = mx.as_matrix(F, [[0, 1, 0], [1, 1, 0], [0, 0, 1]])
    assert mx.det(F, N) == 1 and mx.trace(F, N) == 0
    assert np.array_equal(mx.matmul(F, B, N), mx.matmul(F, N, B))
    assert mx.centralizer_dim(F, mx.zeros(3)) == 9


def test_trace_identities():
    F = GF2
    rec = pr.trace_form_identities(F, 3)
    assert rec.holds and rec.details["maps_tested"] == 168
    A = mx.as_matrix(F, [[1, 0, 0], [0, 0, 1], [0, 1, 1]])
    assert mx.char_poly(F, A) == [1, 0, 0, 1]
    assert mx.trace(F, mx.matmul(F, mx.matmul(F, A, A), A)) == 1 == mx.det(F, A)
    N = mx.elementary(3, 0, 1)
    assert mx.trace(F, mx.matmul(F, mx.matmul(F, N, N), N)) == 0 == mx.det(F, N)


def test_trace_identity_detects_non_preserver():
    # M -> M with the (1,2) entry dropped is not a ternary-form automorphism
    F = GF2

    def drop(m):
        m = np.array(m, copy=True)
        m[0, 1] = 0
        return m
    rec = pr.trace_form_identities(F, 3, [drop])
    assert not rec.holds and rec.details["ternary_failures"] == 1


def test_sl3_stabilizers_have_conjugation_form():
    F = GF2
    T = frobenius_table(3, F)
    stab = T.stabilizer(catalog.sl(3, F))
    assert len(stab) == 336
    assert all(pr.has_conjugation_form(T[int(i)]) for i in stab)
    others = np.setdiff1d(np.arange(len(T)), stab)[:200]
    assert not any(pr.has_conjugation_form(T[int(i)]) for i in others)
