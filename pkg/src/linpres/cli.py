"""Command-line entry point: ``linpres <command> ...``.

Every command prints one JSON document (sorted keys) to stdout or ``--out``.
Exit status is 0 when all checks pass, 1 when any fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .field import make_field, UnsupportedFieldError
from . import catalog, classify, preserver
from . import matrix as mx
from .action import (EnumerationGuardError, are_equivalent, frobenius_table, hyperplane_orbit,
                     orbit)
from .subspace import Subspace, parse_subspace, rank_profile, format_subspace
from .suites import DEFAULT_SEED, SUITES, Options, UnknownSuiteError, run_suite


class UsageError(Exception):
    pass


def _field(args, default=2):
    q = getattr(args, "field", None) or default
    try:
        return make_field(q)
    except UnsupportedFieldError as e:
        raise UsageError(str(e)) from None


def load_space(ref: str, F, n: int = 3) -> Subspace:
    """A registry name, or a path to a subspace fixture file."""
    if os.path.exists(ref):
        with open(ref) as fh:
            return parse_subspace(fh.read(), F)
    try:
        return catalog.space_from_name(ref, F, n)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    except catalog.WrongFieldError as e:
        raise UsageError(str(e)) from None


def _describe(S: Subspace) -> dict:
    return {"shape": list(S.shape), "dim": S.dim, "basis": format_subspace(S).splitlines()}


def _pq(w):
    if w is None:
        return None
    P, Q = w
    return {"P": mx.format_matrix(P), "Q": mx.format_matrix(Q)}


def _emit(doc, args):
    text = json.dumps(doc, indent=2, sort_keys=True, default=str)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# commands --------------------------------------------------------------------------------

def cmd_run(args):
    opts = Options(field=args.field, jobs=args.jobs, long_running=args.long_running,
                   seed=args.seed, space=args.space)
    try:
        rep = run_suite(args.suite, opts)
    except (UnknownSuiteError, ValueError) as e:
        raise UsageError(e.args[0]) from None
    _emit(rep.as_dict(), args)
    return 0 if rep.ok else 1


def cmd_census(args):
    if args.inside:
        F = _field(args)
        V = load_space(args.inside, F)
        found = classify.census_inside(V, args.dim)
        counts = {}
        for _, v in found:
            key = "clean" if v is None else v.kind.value
            counts[key] = counts.get(key, 0) + 1
        doc = {"inside": args.inside, "dim": args.dim, "singular": len(found), "kinds": counts,
               "subspaces": [{"kind": None if v is None else v.kind.value,
                              "basis": format_subspace(s).splitlines()} for s, v in found]}
        _emit(doc, args)
        return 0 if all(v is None or v.kind is not classify.Kind.UNCLASSIFIED for _, v in found) else 1
    if args.ambient != "m3f2":
        raise UsageError("only --ambient m3f2 is supported")
    tally = classify.census_5dim_singular(jobs=args.jobs, dim=args.dim)
    doc = {"ambient": "m3f2", "dim": args.dim, **tally.as_dict()}
    _emit(doc, args)
    return 0 if not tally.unclassified else 1


def cmd_classify(args):
    F = _field(args)
    S = load_space(args.space, F)
    try:
        v = classify.classify_singular(S)
    except ValueError as e:
        raise UsageError(str(e)) from None
    w = v.witness
    if isinstance(w, Subspace):
        w = {"line": [int(x) for x in w.basis[0]]}
    elif isinstance(w, tuple) and len(w) == 2 and not isinstance(w[0], Subspace):
        w = _pq(w)
    doc = {"space": _describe(S), "kind": v.kind.value, "witness": w,
           "unique_line": v.unique_line, "note": v.note}
    _emit(doc, args)
    return 0 if v.kind is not classify.Kind.UNCLASSIFIED else 1


def cmd_orbit(args):
    F = _field(args)
    S = load_space(args.space, F, args.n)
    doc = {"space": _describe(S)}
    try:
        doc["rank_profile"] = list(rank_profile(S))
    except (EnumerationGuardError, mx.UnsupportedSizeError) as e:
        doc["rank_profile"] = None
    if S.codim == 1 and S.is_square:
        doc["hyperplane_orbit_rank"] = hyperplane_orbit(S)
    try:
        doc["orbit_size"] = len(orbit(S))
    except EnumerationGuardError as e:
        doc["orbit_size"] = None
        doc["reason"] = str(e)
    if S.is_square:
        try:
            doc["frobenius_stabilizer"] = int(len(frobenius_table(S.shape[0], F).stabilizer(S)))
        except EnumerationGuardError:
            doc["frobenius_stabilizer"] = None
    _emit(doc, args)
    return 0


def cmd_equiv(args):
    F = _field(args)
    A = load_space(args.space_a, F, args.n)
    B = load_space(args.space_b, F, args.n)
    w = are_equivalent(A, B)
    _emit({"a": _describe(A), "b": _describe(B), "equivalent": w is not None, "witness": _pq(w)}, args)
    return 0


def cmd_search(args):
    F = _field(args)
    V = load_space(args.domain, F, args.n)
    n = V.shape[0]
    try:
        scan = preserver.scan_embeddings(V, n, args.predicate, jobs=args.jobs)
    except EnumerationGuardError as e:
        raise UsageError(str(e)) from None
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    doc = {"domain": _describe(V), "predicate": args.predicate, "field": F.q,
           "injective_maps": scan.candidates, "hits": int(len(scan.hits))}
    if args.check_extension:
        idx = preserver.ExtensionIndex(V)
        nonext = [h for h in scan.hits if not idx.extends(h)]
        doc["extendable"] = int(len(scan.hits) - len(nonext))
        doc["non_extendable"] = len(nonext)
        if nonext:
            first = preserver.SubspaceLinearMap(V, mx.decode(F, nonext[0], n * n))
            doc["first_non_extendable"] = preserver.format_map(first).splitlines()
    _emit(doc, args)
    return 0


ORACLES = {
    "representation": lambda F: preserver.representation_lemma_oracle(2, 2, 2, F),
    "add-nonsingular": lambda F: [preserver.add_to_nonsingular_oracle(p, F) for p in (2, 3)],
    "centralizer": lambda F: preserver.centralizer_rank1_criterion(F, 3),
    "trace-identities": lambda F: preserver.trace_form_identities(F, 3),
}


def cmd_oracle(args):
    F = _field(args)
    if args.name in ("centralizer", "trace-identities") and F.q != 2:
        raise UsageError(f"oracle {args.name} is defined over GF(2)")
    try:
        rec = ORACLES[args.name](F)
    except EnumerationGuardError as e:
        raise UsageError(str(e)) from None
    recs = rec if isinstance(rec, list) else [rec]
    doc = {"oracle": args.name, "field": F.q,
           "records": [{"name": r.name, "holds": r.holds, "details": r.details} for r in recs]}
    _emit(doc, args)
    return 0 if all(r.holds for r in recs) else 1


# parser ----------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", type=int, default=None, help="field order q")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--out", help="write JSON here instead of stdout")

    p = _Parser(prog="linpres", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", parents=[common], help="run a verification suite")
    r.add_argument("--suite", required=True, choices=sorted(SUITES))
    r.add_argument("--long-running", action="store_true")
    r.add_argument("--seed", type=int, default=DEFAULT_SEED)
    r.add_argument("--space", default=None)
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("census", parents=[common], help="5-dimensional singular subspaces")
    c.add_argument("--ambient", default="m3f2")
    c.add_argument("--inside", default=None, help="space name or fixture")
    c.add_argument("--dim", type=int, default=5)
    c.set_defaults(func=cmd_census)

    k = sub.add_parser("classify", parents=[common], help="classify a singular subspace")
    k.add_argument("--space", required=True)
    k.set_defaults(func=cmd_classify)

    o = sub.add_parser("orbit", parents=[common], help="orbit data of a subspace")
    o.add_argument("--space", required=True)
    o.add_argument("--n", type=int, default=3)
    o.set_defaults(func=cmd_orbit)

    e = sub.add_parser("equiv", parents=[common], help="test equivalence of two subspaces")
    e.add_argument("--space-a", required=True)
    e.add_argument("--space-b", required=True)
    e.add_argument("--n", type=int, default=3)
    e.set_defaults(func=cmd_equiv)

    s = sub.add_parser("search", parents=[common], help="exhaustive embedding search")
    s.add_argument("--domain", required=True)
    s.add_argument("--predicate", default="weak", choices=sorted(preserver.PREDICATES))
    s.add_argument("--check-extension", action="store_true")
    s.add_argument("--n", type=int, default=2)
    s.set_defaults(func=cmd_search)

    w = sub.add_parser("oracle", parents=[common], help="brute-force lemma oracles")
    w.add_argument("--name", required=True, choices=sorted(ORACLES))
    w.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"linpres: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
