"""Named verification suites producing deterministic JSON-ready reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .field import GF2, make_field
from . import catalog, classify, preserver
from . import matrix as mx
from .action import (EnumerationGuardError, FrobeniusMap, act, apply_frobenius,
                     are_equivalent, frobenius_table, gl_array, gl_order)
from .subspace import (Subspace, count_nonsingular, enumerate_subspaces, meet,
                       gaussian_binomial)

SCHEMA = 1
DEFAULT_SEED = 20240917


class UnknownSuiteError(KeyError):
    pass


@dataclass
class Options:
    field: int | None = None
    jobs: int = 1
    long_running: bool = False
    seed: int = DEFAULT_SEED
    space: str | None = None


@dataclass
class Claim:
    id: str
    description: str
    paper_ref: str
    expected: object
    actual: object = None
    status: str = "pass"
    reason: str | None = None

    def as_dict(self):
        d = {"id": self.id, "description": self.description, "paper_ref": self.paper_ref,
             "expected": self.expected, "actual": self.actual, "status": self.status}
        if self.reason is not None:
            d["reason"] = self.reason
        return d


@dataclass
class Report:
    suite: str
    field: object
    parameters: dict
    seed: int
    claims: list = field(default_factory=list)
    runtime_ms: int = 0
    partitions: int = 1

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.claims)

    def as_dict(self):
        return {"schema": SCHEMA, "suite": self.suite, "field": self.field,
                "parameters": self.parameters, "seed": self.seed,
                "claims": [c.as_dict() for c in self.claims],
                "runtime_ms": self.runtime_ms, "partitions": self.partitions}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def _plain(x):
    """Normalize numpy scalars and containers for exact comparison and JSON."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


class _Collector:
    def __init__(self):
        self.claims = []

    def check(self, id, description, ref, expected, compute: Callable):
        c = Claim(id, description, ref, _plain(expected))
        try:
            c.actual = _plain(compute())
            c.status = "pass" if c.actual == c.expected else "fail"
        except EnumerationGuardError as e:
            c.status, c.reason = "skipped", str(e)
        self.claims.append(c)
        return c.actual

    def skip(self, id, description, ref, expected, reason):
        self.claims.append(Claim(id, description, ref, _plain(expected), None, "skipped", reason))


# counts --------------------------------------------------------------------------------

def _charpoly_split(S: Subspace):
    F = S.field
    out = {}
    for m in S.elements().reshape(-1, *S.shape):
        if mx.det(F, m):
            key = " ".join(map(str, mx.char_poly(F, m)))
            out[key] = out.get(key, 0) + 1
    return out


def suite_counts(opts: Options, col: _Collector):
    F = GF2
    sl3, v2 = catalog.sl(3, F), catalog.V2_F2()
    col.check("sl3-nonsingular", "invertible elements of sl3(GF(2))",
              "nonsingular count of sl3 over GF(2)", 80, lambda: count_nonsingular(sl3))
    # coefficients low degree first: t^3+t+1 -> 1 1 0 1, t^3+1 -> 1 0 0 1
    col.check("sl3-charpoly-split", "invertible sl3(GF(2)) elements by characteristic polynomial",
              "nonsingular count of sl3 over GF(2)", {"1 0 0 1": 56, "1 1 0 1": 24},
              lambda: _charpoly_split(sl3))
    col.check("v2-nonsingular", "invertible elements of V2(GF(2))",
              "nonsingular count of V2 over GF(2)", 88, lambda: count_nonsingular(v2))
    col.check("gl3-order", "|GL_3(GF(2))| by enumeration", "order of GL_3(GF(2))", 168,
              lambda: len(gl_array(3, F)))
    col.check("gaussian-binomial-9-5", "5-dimensional subspaces of M_3(GF(2))",
              "Grassmannian count", 3309747, lambda: gaussian_binomial(9, 5, 2))
    rng = np.random.default_rng(opts.seed)
    F3 = make_field(3)

    def sampled():
        a = rng.integers(0, 3, size=(1000, 3, 3), dtype=np.uint8)
        b = rng.integers(0, 3, size=(1000, 3, 3), dtype=np.uint8)
        _, da = mx.batch_rank_det(F3, a)
        _, db = mx.batch_rank_det(F3, b)
        _, dab = mx.batch_rank_det(F3, mx.matmul(F3, a, b))
        return int(np.sum(dab != F3.mul(da, db)))
    col.check("det-multiplicative-sampled", "det(AB) = det A det B failures on 1000 seeded pairs in M_3(GF(3))",
              "determinant multiplicativity", 0, sampled)


# census -------------------------------------------------------------------------------

def suite_census(opts: Options, col: _Collector):
    tally = classify.census_5dim_singular(jobs=opts.jobs)
    d = tally.as_dict()
    ref = "classification of 5-dimensional singular subspaces of M_3(GF(2))"
    col.check("subspaces", "5-dimensional subspaces enumerated", "Grassmannian count", 3309747,
              lambda: d["subspaces"])
    col.check("singular", "singular ones", ref, 1372, lambda: d["singular"])
    for key, exp, r in [("M_D", 441, ref), ("M^D", 441, ref), ("first-kind", 49, ref),
                        ("second-kind", 441, "count of second-kind subspaces n2 = 7^2 x 3^2")]:
        col.check(key, f"{key} verdicts", r, exp, lambda key=key: d["kinds"][key])
    col.check("unclassified", "subspaces escaping the classification", ref, 0,
              lambda: d["kinds"]["unclassified"])
    col.check("non-unique-lines", "verdicts whose line D is not unique", "uniqueness of D", 0,
              lambda: d["non_unique_lines"])


# v2-structure ----------------------------------------------------------------------------

def v2_structure_data():
    F = GF2
    v2 = catalog.V2_F2()
    found = classify.census_inside(v2, 5)
    spaces = [s for s, _ in found]
    kinds = [v.kind for _, v in found]
    return v2, spaces, kinds


def _in_e12(x):
    return not x[2]


def suite_v2_structure(opts: Options, col: _Collector):
    F = GF2
    v2, spaces, kinds = v2_structure_data()
    K = classify.Kind
    ref_count = "singular 5-dimensional subspaces of V2(GF(2))"
    col.check("total", "singular 5-dimensional subspaces of V2(GF(2))", ref_count, 18,
              lambda: len(spaces))
    col.check("non-maximal", "contained in some M_D or M^D", ref_count, 14,
              lambda: sum(k in (K.M_D, K.M_SUP_D) for k in kinds))
    lines = [l.basis[0] for l in catalog.all_lines(F, 3)]
    expected_nonmax = {meet(v2, catalog.M_D(x, F)) for x in lines} | \
        {meet(v2, catalog.M_sup_D(x, F)) for x in lines}
    col.check("non-maximal-are-intersections", "they are exactly V2 meet M_D and V2 meet M^D",
              ref_count, True,
              lambda: {s for s, k in zip(spaces, kinds) if k in (K.M_D, K.M_SUP_D)} == expected_nonmax)
    firsts = [s for s, k in zip(spaces, kinds) if k is K.FIRST]
    col.check("first-kind-is-F", "the single first-kind subspace equals F",
              "uniqueness of the first-kind subspace in V2", True,
              lambda: firsts == [catalog.F_cal()])
    seconds = {s for s, k in zip(spaces, kinds) if k is K.SECOND}
    G = catalog.G_cal()

    def conjugates():
        out = set()
        for P in gl_array(2, F):
            B = mx.identity(F, 3)
            B[:2, :2] = P
            out.add(act(B, B, G))
        return out
    col.check("second-kind-count", "second-kind subspaces in V2", "three second-kind subspaces in V2", 3,
              lambda: len(seconds))
    col.check("second-kind-conjugates-of-G", "they are the conjugates of G by diag(P, 1)",
              "three second-kind subspaces in V2", True, lambda: seconds == conjugates())

    table = classify.intersection_dim_table(spaces)
    is_X = []
    for s, k in zip(spaces, kinds):
        if k is K.M_D:
            W = classify.common_kernel(s)
        elif k is K.M_SUP_D:
            W = classify.common_coimage(s)
        else:
            is_X.append(False)
            continue
        is_X.append(W.dim == 1 and not _in_e12(W.basis[0]))
    off = table + np.diag(np.full(len(spaces), -99))

    def dichotomy():
        viol = 0
        for i, x in enumerate(is_X):
            mx_off = off[i].max()
            if x and mx_off > 3:
                viol += 1
            if not x and mx_off != 4:
                viol += 1
        return {"X-members": int(sum(is_X)), "violations": viol}
    col.check("intersection-dichotomy",
              "X-type spaces meet every other in dim <= 3, the rest have a dim-4 partner",
              "intersection dichotomy in V2", {"X-members": 8, "violations": 0}, dichotomy)

    def dim3_characterization():
        bad = 0
        for i, x in enumerate(is_X):
            if not x:
                continue
            other = K.M_SUP_D if kinds[i] is K.M_D else K.M_D
            threes = {j for j in range(len(spaces)) if j != i and table[i, j] == 3}
            want = {j for j in range(len(spaces)) if kinds[j] is other}
            bad += threes != want
        return bad
    col.check("dim3-partners", "dim 3 intersections of an X-type space are exactly the dual-kind ones",
              "characterization of dimension-3 intersections", 0, dim3_characterization)
    col.check("diagonal", "diagonal of the intersection table", "trivial", [5] * 18,
              lambda: [int(v) for v in np.diag(table)])
    e3 = catalog.M_D([0, 0, 1], F)
    e23 = catalog.M_D([0, 1, 1], F)
    col.check("mD-mD-intersection", "dim(V2 meet M_<e3> meet M_<e2+e3>)",
              "intersection dichotomy in V2", 2, lambda: meet(meet(v2, e3), e23).dim)
    col.check("mD-e1-meets-F", "dim((V2 meet M_<e1>) meet F)", "intersection dichotomy in V2", 4,
              lambda: meet(meet(v2, catalog.M_D([1, 0, 0], F)), catalog.F_cal()).dim)


# sl3-structure ------------------------------------------------------------------------------

def suite_sl3_structure(opts: Options, col: _Collector):
    F = GF2
    sl3 = catalog.sl(3, F)
    K = classify.Kind
    col.check("no-first-kind", "first-kind subspaces inside sl3(GF(2))",
              "no subspace of sl3(GF(2)) is equivalent to R(1,1)", 0,
              lambda: sum(v.kind is K.FIRST for _, v in classify.census_inside(sl3, 5)))
    cen = preserver.centralizer_rank1_criterion(F, 3)
    col.check("centralizer-criterion", "rank 1 iff the centralizer criterion, over all 256 elements",
              "centralizer lemma", {"elements": 256, "violators": []},
              lambda: {"elements": cen.details["elements"], "violators": cen.details["violators"]})
    table = frobenius_table(3, F)
    stab = table.stabilizer(sl3)
    col.check("stabilizer-size", "Frobenius maps stabilizing sl3(GF(2))",
              "automorphisms of sl3(GF(2))", 336, lambda: len(stab))
    col.check("conjugation-form", "stabilizing maps of the form M -> P M P^-1 or P M^T P^-1",
              "form of nonsingularity preservers of sl3(GF(2))", 336,
              lambda: sum(preserver.has_conjugation_form(table[int(i)]) for i in stab))
    ident = preserver.trace_form_identities(F, 3)
    col.check("trace-cube", "tr A^3 = det A on sl3(GF(2))", "Newton identity on sl3(GF(2))", True,
              lambda: ident.details["cube_equals_det"])
    col.check("polarization", "det(A+B) - det A - det B = tr(A^2 B) + tr(B^2 A)",
              "polarized cubic form", True, lambda: ident.details["polarization"])
    col.check("ternary-conjugation", "ternary trace identity under all 168 conjugations",
              "ternary trace identity", {"maps_tested": 168, "ternary_failures": 0},
              lambda: {k: ident.details[k] for k in ("maps_tested", "ternary_failures")})
    stab_maps = [table[int(i)] for i in stab]
    col.check("ternary-stabilizers", "ternary trace identity under the 336 stabilizing maps",
              "ternary trace identity", 0,
              lambda: preserver.trace_form_identities(F, 3, stab_maps).details["ternary_failures"])


# counterexamples -------------------------------------------------------------------------------

def suite_counterexamples(opts: Options, col: _Collector):
    F = GF2
    phi = preserver.phi_counterexample(3, F)
    ref_phi = "counterexample map on H_n"
    col.check("phi-elements", "elements of H_3(GF(2))", ref_phi, 128, lambda: len(phi.domain.elements()))
    col.check("phi-strong", "Phi is a strong preserver", ref_phi, True,
              lambda: preserver.is_strong_preserver(phi))
    col.check("phi-not-rank", "Phi is not a rank preserver", ref_phi, False,
              lambda: preserver.is_rank_preserver(phi))

    def witness():
        m, a, b = preserver.rank_witness(phi)
        return {"matrix": mx.format_matrix(m), "rank": a, "image_rank": b}
    col.check("phi-rank-witness", "first rank-changing element", ref_phi,
              {"matrix": "0 0 0; 0 1 0; 0 0 0", "rank": 1, "image_rank": 2}, witness)
    col.check("frobenius-candidates", "distinct Frobenius automorphisms of M_3(GF(2))",
              "Frobenius automorphisms", 56448, lambda: len(frobenius_table(3, F)))
    col.check("phi-no-extension", "Phi extends to no Frobenius automorphism", ref_phi, None,
              lambda: preserver.frobenius_extension(phi, "scan"))
    ab = preserver.alphabeta_counterexample()
    ref_ab = "non-extendable determinant preserver on V1(GF(2))"
    col.check("alphabeta-elements", "elements of V1(GF(2))", ref_ab, 256, lambda: len(ab.domain.elements()))
    col.check("alphabeta-bijective", "the map is injective", ref_ab, True, ab.is_injective)
    col.check("alphabeta-det", "the map preserves determinants", ref_ab, True,
              lambda: preserver.is_det_preserver(ab))
    col.check("alphabeta-identity", "(L, C) pairs violating the adjugate identity", ref_ab, [],
              preserver.alphabeta_identity)
    col.check("alphabeta-no-extension", "the map extends to no Frobenius automorphism", ref_ab, None,
              lambda: preserver.frobenius_extension(ab, "scan"))
    col.check("det-iff-strong", "over GF(2) det and strong preservation agree on both maps",
              "determinants over GF(2)", True,
              lambda: all(preserver.is_det_preserver(f) == preserver.is_strong_preserver(f)
                          for f in (phi, ab)))


# oracles ----------------------------------------------------------------------------------

def suite_oracles(opts: Options, col: _Collector):
    rep = preserver.representation_lemma_oracle(2, 2, 2, GF2)
    ref_rep = "representation lemma phi(M) = MC"
    col.check("representation-survivors", "linear maps on M_2(GF(2)) with im phi(M) in im M",
              ref_rep, 16, lambda: rep.details["survivors"])
    col.check("representation-right-mult", "survivors are exactly the right multiplications",
              ref_rep, True, lambda: rep.details["survivors_equal_right_multiplications"])
    for p in (2, 3):
        for q in (2, 3):
            col.check(f"add-nonsingular-p{p}-q{q}", f"A with A + P invertible for all P in GL_{p}(GF({q}))",
                      "A + P nonsingular for all P forces A = 0", [mx.format_matrix(np.zeros((p, p), np.uint8))],
                      lambda p=p, q=q: preserver.add_to_nonsingular_oracle(p, make_field(q)).details["satisfying"])
    col.check("centralizer-criterion", "centralizer criterion violators in sl3(GF(2))",
              "centralizer lemma", [],
              lambda: preserver.centralizer_rank1_criterion().details["violators"])
    col.check("trace-identities", "trace identities on sl3(GF(2))", "ternary trace identity", True,
              lambda: preserver.trace_form_identities().holds)


# M_2 hyperplanes -----------------------------------------------------------------------------

def _hyperplanes(F):
    return list(enumerate_subspaces(4, 3, F, shape=(2, 2)))


def _extension_stats(V, predicate, jobs):
    scan = preserver.scan_embeddings(V, 2, predicate, jobs=jobs)
    idx = preserver.ExtensionIndex(V)
    ext = sum(idx.extends(h) for h in scan.hits)
    return len(scan.hits), ext


def _m2_for_field(q, opts, col):
    F = make_field(q)
    hyps = _hyperplanes(F)
    ref19 = "strong preservers on hyperplanes of M_2 extend"
    ref20 = "weak preservers on sl2 extend"
    ref22 = "weak preservers on hyperplanes of M_2 over small fields"
    col.check(f"q{q}-hyperplanes", f"hyperplanes of M_2(GF({q}))", "Grassmannian count",
              (q ** 4 - 1) // (q - 1), lambda: len(hyps))
    col.check(f"q{q}-injective-per-domain", "injective linear maps scanned per hyperplane",
              "injective map count", (q ** 4 - 1) * (q ** 4 - q) * (q ** 4 - q ** 2),
              lambda: preserver.injective_map_count(q, 3, 4))

    def strong_all():
        bad = 0
        hits = 0
        for V in hyps:
            h, e = _extension_stats(V, "strong", opts.jobs)
            hits += h
            bad += h - e
        return {"non_extendable": bad, "nonzero_hits": hits > 0}
    col.check(f"q{q}-strong-extend", "strong preservers from any hyperplane without extension",
              ref19, {"non_extendable": 0, "nonzero_hits": True}, strong_all)
    sl2 = catalog.sl(2, F)

    def sl2_type():
        bad = 0
        domains = 0
        for V in hyps:
            if are_equivalent(V, sl2) is None:
                continue
            domains += 1
            h, e = _extension_stats(V, "weak", opts.jobs)
            bad += h - e
        return {"domains": domains, "non_extendable": bad}
    n_sl2 = len(gl_array(2, F)) * len(gl_array(2, F)) // _stab_size(sl2)
    col.check(f"q{q}-sl2-weak-extend", "weak preservers from hyperplanes equivalent to sl2 without extension",
              ref20, {"domains": n_sl2, "non_extendable": 0}, sl2_type)
    t2 = catalog.T_upper(2, F)

    def t2_nonext():
        h, e = _extension_stats(t2, "weak", opts.jobs)
        return h > e
    col.check(f"q{q}-t2-weak-nonextendable", "some weak preserver from T2+ has no extension",
              ref22, True, t2_nonext)


def _stab_size(S):
    """Size of the GL x GL stabilizer of S, by direct count."""
    F = S.field
    n = S.shape[0]
    h = S.annihilator()
    B = S.basis_matrices()
    count = 0
    from .action import gl_inverses
    gi = gl_inverses(n, F)
    for P in gl_array(n, F):
        imgs = mx.vec(mx.matmul(F, mx.matmul(F, P, B)[None], gi[:, None]))
        count += int((~mx.matmul(F, imgs, h.T).reshape(len(gi), -1).any(axis=1)).sum())
    return count


def suite_m2_hyperplanes(opts: Options, col: _Collector):
    qs = [opts.field] if opts.field else [2, 3]
    for q in qs:
        if q not in (2, 3):
            raise ValueError(f"m2-hyperplanes supports q in 2, 3, not {q}")
        _m2_for_field(q, opts, col)


def suite_m2_hyperplanes_f4(opts: Options, col: _Collector):
    ref = "weak preservers on hyperplanes of M_2 extend when q >= 4"
    if not opts.long_running:
        for id_ in ("q4-t2-weak-extend", "q4-sl2-weak-extend"):
            col.skip(id_, "weak preservers without extension", ref, 0, "needs --long-running")
        return
    F = make_field(4)
    for name, V in (("t2", catalog.T_upper(2, F)), ("sl2", catalog.sl(2, F))):
        def run(V=V):
            h, e = _extension_stats(V, "weak", opts.jobs)
            return h - e
        col.check(f"q4-{name}-weak-extend", f"weak preservers from {name} over GF(4) without extension",
                  ref, 0, run)


SUITES = {
    "counts": (suite_counts, 2),
    "census": (suite_census, 2),
    "v2-structure": (suite_v2_structure, 2),
    "sl3-structure": (suite_sl3_structure, 2),
    "counterexamples": (suite_counterexamples, 2),
    "oracles": (suite_oracles, 2),
    "m2-hyperplanes": (suite_m2_hyperplanes, None),
    "m2-hyperplanes-f4": (suite_m2_hyperplanes_f4, 4),
}


def run_suite(name: str, opts: Options | None = None) -> Report:
    opts = opts or Options()
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn, default_q = SUITES[name]
    if default_q is None:
        q = [opts.field] if opts.field else [2, 3]
    else:
        q = default_q
    params = {"long_running": opts.long_running}
    rep = Report(name, q, params, opts.seed, partitions=max(1, opts.jobs))
    col = _Collector()
    t = time.perf_counter()
    fn(opts, col)
    rep.runtime_ms = int(round((time.perf_counter() - t) * 1000))
    rep.claims = col.claims
    return rep
