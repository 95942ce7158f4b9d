"""Command-line front end.

Behaviors travel as JSON on stdin/stdout, so verbs compose in pipelines:

    bellscope gen pr --variant 0 | bellscope eval --family chsh --variant 0

Exit codes: 0 success or confirmed, 1 violated or refuted, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import catalog, polytopes, quantum, theorems
from .core import (
    Behavior,
    DimensionError,
    behavior_from_json,
    behavior_to_json,
    format_rational,
    is_no_signaling,
    project_expectations,
    signaling_gap,
    uniform_behavior,
    validate_behavior,
)
from .sampling import random_general_behavior, random_ns_behavior

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _num(x):
    if isinstance(x, float):
        return x
    return format_rational(x)


def _emit(obj, out):
    out.write(json.dumps(obj, indent=2, ensure_ascii=False))
    out.write("\n")


def _read_behavior(args) -> Behavior:
    src = open(args.input) if args.input and args.input != "-" else sys.stdin
    try:
        text = src.read()
    finally:
        if src is not sys.stdin:
            src.close()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError("expected a behavior object")
    try:
        b = behavior_from_json(data)
    except (DimensionError, ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    if args.tolerance is not None and not b.exact:
        b = Behavior(b.p, b.scenario, Fraction(args.tolerance))
    return b


def _parse_bits(s: str):
    table = {"0": 0, "1": 1, "+": 0, "-": 1}
    if len(s) != 4 or any(ch not in table for ch in s):
        raise InputError(f"--bits needs four characters from 0/1 or +/-, got {s!r}")
    return tuple(table[ch] for ch in s)


# --- verbs -----------------------------------------------------------------------


def cmd_gen(args, out):
    kind = args.kind
    if kind == "pr":
        try:
            b = polytopes.pr_box(args.variant)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    elif kind == "local":
        b = polytopes.local_vertex(_parse_bits(args.bits))
    elif kind == "uniform":
        b = uniform_behavior()
    elif kind == "signaling-4":
        b = polytopes.signaling_protocol_4()
    elif kind == "signaling-6":
        b = polytopes.signaling_protocol_6()
    elif kind == "singlet":
        if args.angles is None or len(args.angles) != 4:
            raise InputError("--angles needs four values: a a' b b'")
        try:
            m = (quantum.MeasurementAngles.from_degrees(*args.angles) if args.degrees
                 else quantum.MeasurementAngles(*args.angles))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        b = quantum.singlet_behavior(m, args.tolerance)
        if args.max_denominator:
            try:
                b = quantum.rationalize(b, args.max_denominator).behavior
            except quantum.RationalizationError as exc:
                raise InputError(str(exc)) from None
    else:  # random
        rng = np.random.default_rng(args.seed)
        b = random_ns_behavior(rng) if args.random_kind == "ns" else random_general_behavior(rng)
    _emit(behavior_to_json(b), out)
    return EXIT_OK


def cmd_check(args, out):
    b = _read_behavior(args)
    rep = validate_behavior(b)
    ns = is_no_signaling(b)
    _emit({
        "valid": rep.ok,
        "violations": [v.describe() for v in rep.violations],
        "no_signaling": ns.ok,
        "violated_equalities": list(ns.violated),
        "signaling_gap": _num(signaling_gap(b)),
    }, out)
    return EXIT_OK if rep.ok and ns.ok else EXIT_VIOLATED


def cmd_project(args, out):
    b = _read_behavior(args)
    _emit({k: _num(v) for k, v in project_expectations(b).as_dict().items()}, out)
    return EXIT_OK


def _select(args):
    try:
        fam = catalog.family(args.family)
        if args.variant is None:
            return list(fam)
        return [catalog.find(args.family, args.variant)]
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_eval(args, out):
    b = _read_behavior(args)
    rows = []
    for q in _select(args):
        e = catalog.evaluate(q, b)
        rows.append({
            "family": q.family, "variant_id": q.variant_id,
            "expectation_form": q.expectation_form,
            "value": _num(e.value), "bound": format_rational(q.bound),
            "satisfied": bool(e.satisfied), "slack": _num(e.slack),
        })
    _emit(rows[0] if args.variant is not None else rows, out)
    return EXIT_OK if all(r["satisfied"] for r in rows) else EXIT_VIOLATED


def _kind(p: str) -> str:
    return "no_signaling" if p == "ns" else p


def cmd_maximize(args, out):
    vs = polytopes.vertex_set(_kind(args.polytope))
    rows = []
    for q in _select(args):
        opt, argmax = catalog.max_over(q, vs.kind, cross_check=args.cross_check)
        rows.append({
            "family": q.family, "variant_id": q.variant_id,
            "polytope": vs.kind, "max": format_rational(opt),
            "bound": format_rational(q.bound), "holds": opt <= q.bound,
            "maximizers": [vs.labels[i] for i in argmax],
        })
    _emit(rows[0] if args.variant is not None else rows, out)
    return EXIT_OK if all(r["holds"] for r in rows) else EXIT_VIOLATED


def cmd_member(args, out):
    b = _read_behavior(args)
    if args.polytope == "ns":
        res = polytopes.ns_membership(b, cross_check=not args.no_cross_check)
        obj = {"polytope": "no_signaling", "member": res.member,
               "violated_equalities": list(res.violated)}
        if res.hull_member is not None:
            obj["hull_member"] = res.hull_member
        if res.weights:
            obj["weights"] = [{"vertex": lab, "weight": format_rational(w)} for lab, w in res.weights]
        _emit(obj, out)
        return EXIT_OK if res.member else EXIT_VIOLATED
    if not b.exact:
        raise InputError("local membership needs an exact behavior; "
                         "generate with --max-denominator to rationalize")
    res = polytopes.local_membership(b)
    obj = {"polytope": "local", "member": res.member}
    if res.member:
        obj["weights"] = [{"vertex": lab, "weight": format_rational(w)} for lab, w in res.weights]
    else:
        obj["separator"] = {
            "coeffs": [format_rational(c) for c in res.coeffs],
            "bound": format_rational(res.bound),
            "normalized": [format_rational(c) for c in res.normalized],
        }
    _emit(obj, out)
    return EXIT_OK if res.member else EXIT_VIOLATED


def cmd_facet_rank(args, out):
    vs = polytopes.vertex_set(_kind(args.polytope))
    rows = []
    for q in _select(args):
        rep = polytopes.facet_saturation_rank(q, vs)
        rows.append({
            "family": q.family, "variant_id": q.variant_id, "polytope": vs.kind,
            "valid": rep.valid, "max_value": format_rational(rep.max_value),
            "saturating": rep.saturating_count, "affine_rank": rep.affine_rank,
            "dimension": rep.dimension, "is_facet": rep.is_facet,
        })
    _emit(rows[0] if args.variant is not None else rows, out)
    return EXIT_OK if all(r["valid"] for r in rows) else EXIT_VIOLATED


def cmd_verify(args, out):
    names = list(theorems.VERIFIERS) if args.claim == "all" else [args.claim]
    certs = [theorems.VERIFIERS[n]() for n in names]
    objs = [c.to_json(timing=args.timing) for c in certs]
    _emit(objs if args.claim == "all" else objs[0], out)
    return EXIT_OK if all(c.confirmed for c in certs) else EXIT_VIOLATED


def cmd_catalog(args, out):
    names = [args.family] if args.family else catalog.FAMILIES
    try:
        ineqs = [q for n in names for q in catalog.family(n)]
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit([q.to_json() for q in ineqs], out)
    return EXIT_OK


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bellscope", description=__doc__.splitlines()[0])
    p.add_argument("--tolerance", type=str, default=None,
                   help="approximate-mode tolerance (default BELLSCOPE_TOLERANCE or 1e-9)")
    sub = p.add_subparsers(dest="verb", required=True)

    def with_input(sp):
        sp.add_argument("-i", "--input", default=None, help="behavior JSON file (default stdin)")
        return sp

    g = sub.add_parser("gen", help="emit a behavior")
    gs = g.add_subparsers(dest="kind", required=True)
    gp = gs.add_parser("pr")
    gp.add_argument("--variant", type=int, default=polytopes.CANONICAL_PR)
    gl = gs.add_parser("local")
    gl.add_argument("--bits", required=True, help="A[a] A[a'] B[b] B[b'] as 0/1 or +/-")
    gq = gs.add_parser("singlet")
    gq.add_argument("--angles", type=float, nargs=4, required=True, metavar=("A", "A1", "B", "B1"))
    gq.add_argument("--degrees", action="store_true")
    gq.add_argument("--max-denominator", type=int, default=None)
    gs.add_parser("uniform")
    gs.add_parser("signaling-4")
    gs.add_parser("signaling-6")
    gr = gs.add_parser("random")
    gr.add_argument("--kind", dest="random_kind", choices=("general", "ns"), default="general")
    gr.add_argument("--seed", type=int, default=0)

    with_input(sub.add_parser("check", help="normalization, positivity and no-signaling"))
    with_input(sub.add_parser("project", help="expectation values"))

    families = list(catalog.FAMILIES)
    e = with_input(sub.add_parser("eval", help="evaluate catalog inequalities"))
    e.add_argument("--family", required=True, choices=families)
    e.add_argument("--variant", default=None)

    mx = sub.add_parser("maximize", help="maximum over a polytope")
    mx.add_argument("--family", required=True, choices=families)
    mx.add_argument("--variant", default=None)
    mx.add_argument("--polytope", required=True, choices=("local", "ns", "no_signaling", "general"))
    mx.add_argument("--cross-check", action="store_true", help="confirm with the simplex solver")

    mb = with_input(sub.add_parser("member", help="polytope membership"))
    mb.add_argument("--polytope", required=True, choices=("local", "ns"))
    mb.add_argument("--no-cross-check", action="store_true")

    fr = sub.add_parser("facet-rank", help="affine rank of saturating vertices")
    fr.add_argument("--family", required=True, choices=families)
    fr.add_argument("--variant", default=None)
    fr.add_argument("--polytope", required=True, choices=("local", "ns", "no_signaling", "general"))

    v = sub.add_parser("verify", help="theorem certificates")
    v.add_argument("claim", choices=list(theorems.VERIFIERS) + ["all"])
    v.add_argument("--timing", action="store_true", help="include wall times (not reproducible)")

    c = sub.add_parser("catalog", help="dump the inequality catalog")
    c.add_argument("--family", choices=families, default=None)
    return p


COMMANDS = {
    "gen": cmd_gen, "check": cmd_check, "project": cmd_project, "eval": cmd_eval,
    "maximize": cmd_maximize, "member": cmd_member, "facet-rank": cmd_facet_rank,
    "verify": cmd_verify, "catalog": cmd_catalog,
}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.tolerance is not None:
        try:
            if Fraction(args.tolerance) < 0:
                raise ValueError
        except (ValueError, ZeroDivisionError):
            print(json.dumps({"error": f"bad tolerance {args.tolerance!r}"}), file=sys.stderr)
            return EXIT_INPUT
    try:
        return COMMANDS[args.verb](args, out)
    except (InputError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
