"""Command-line interface.

Exit codes: 0 on success, 1 when the built-in verification suite reports a
failing check (or an internal invariant breaks), 2 on malformed input or a
request beyond the configured size bounds.

Structure files are JSON objects of the form

    {"signature": [{"name": "E", "arity": 2}], "size": 6, "relations": {"E": [[0, 1], ...]}}

with vertices 0..size-1 and tuples sorted lexicographically on output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cyclic import (
    CyclicEmbedding,
    QZElem,
    amalgamate,
    eta,
    extend_automorphism,
    k_apply,
    lemma_solve,
    prufer_decompose,
    uniformly_homogeneous_cyclic,
)
from .errors import CapabilityError, InputError, InternalError
from .fixtures import M_VERTEX_NAMES, digraph_m
from .homogeneity import analyze, katetov_obstruction
from .search import SearchConfig, classify_all
from .structures import FinStructure, age, automorphism_group, load_structure
from .verify import verify_paper


def _emit(obj: dict) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _namer(s: FinStructure):
    """Vertex pretty-printer; decodes the bundled digraph M by name."""
    if s == digraph_m():
        return lambda v: M_VERTEX_NAMES[v]
    return str


def _format_subset(subset, name) -> str:
    return "{" + ", ".join(name(v) for v in subset) + "}"


def _cmd_check(args) -> int:
    s = load_structure(args.file)
    report = analyze(s)
    if args.format == "json":
        payload = report.to_json_dict()
        payload["schema"] = 1
        payload["size"] = s.size
        _emit(payload)
        return 0
    name = _namer(s)
    yn = {True: "yes", False: "no", None: "n/a (not homogeneous)"}
    print(f"structure: {args.file} ({s.size} vertices)")
    print(f"homogeneous:            {yn[report.homogeneous]}")
    if report.homogeneity_failure is not None:
        w = report.homogeneity_failure
        pairs = ", ".join(f"{name(a)} -> {name(b)}" for a, b in zip(w.domain, w.images))
        print(f"  unextendable isomorphism: {pairs}")
    print(f"set-homogeneous:        {yn[report.set_homogeneous]}")
    if report.set_homogeneity_failure is not None:
        a, b = report.set_homogeneity_failure
        print(f"  no automorphism carries {_format_subset(a, name)} onto {_format_subset(b, name)}")
    print(f"uniformly homogeneous:  {yn[report.uniformly_homogeneous]}")
    if report.uniformity_failing_class is not None:
        print(
            "  no homomorphic extension operator for the class of "
            f"{_format_subset(report.uniformity_failing_class, name)}"
        )
    print(f"extension-functor obstruction: {yn[report.katetov_obstructed]}")
    if report.katetov_witness is not None:
        obs = report.katetov_witness
        print(
            f"  {obs.witness} fixes {_format_subset(obs.fixed_set, name)} pointwise"
        )
    return 0


def _cmd_aut(args) -> int:
    s = load_structure(args.file)
    group = automorphism_group(s)
    if args.format == "json":
        _emit(
            {
                "schema": 1,
                "order": group.order,
                "automorphisms": [list(p.mapping) for p in group.sorted_elements()],
            }
        )
        return 0
    print(f"automorphism group of {args.file}: order {group.order}")
    for p in group.sorted_elements():
        print(f"  {p}")
    return 0


def _cmd_age(args) -> int:
    s = load_structure(args.file)
    classes = age(s)
    if args.format == "json":
        _emit({"schema": 1, "count": len(classes), "classes": [c.to_json_dict() for c in classes]})
        return 0
    print(f"age of {args.file}: {len(classes)} isomorphism classes")
    for c in classes:
        rels = "; ".join(f"{n}={list(c.rel(n))}" for n in c.signature.names)
        print(f"  size {c.size}: {rels if rels else '(no relations)'}")
    return 0


def _cmd_obstruction(args) -> int:
    s = load_structure(args.file)
    obs = katetov_obstruction(s)
    if args.format == "json":
        _emit(
            {
                "schema": 1,
                "obstructed": obs is not None,
                "fixed_set": list(obs.fixed_set) if obs else None,
                "automorphism": list(obs.witness.mapping) if obs else None,
            }
        )
        return 0
    name = _namer(s)
    if obs is None:
        print("no obstruction: every nontrivial automorphism moves every point")
    else:
        print(f"obstruction: {obs.witness} fixes {_format_subset(obs.fixed_set, name)} pointwise")
    return 0


def _cmd_search(args) -> int:
    mask_range = None
    if args.mask_range:
        try:
            lo, hi = args.mask_range.split(":")
            mask_range = (int(lo, 0), int(hi, 0))
        except ValueError:
            raise InputError(f"mask range must look like START:STOP, got {args.mask_range!r}")
    config = SearchConfig(
        max_vertices=args.max_vertices,
        chunks=args.chunks,
        checkpoint_path=args.checkpoint,
        mask_range=mask_range,
        backend=args.backend,
    )
    report = classify_all(config)
    if args.format == "json":
        _emit(report.to_json_dict())
    else:
        print(report.render_text())
    return 0


def _cmd_verify_paper(args) -> int:
    report = verify_paper()
    if args.format == "json":
        _emit(report.to_json_dict())
    else:
        print(report.render_text())
    return 0 if report.all_passed else 1


def _parse_fraction(text: str) -> QZElem:
    try:
        num, den = text.split("/")
        return QZElem(int(num), int(den))
    except (ValueError, TypeError):
        raise InputError(f"expected a fraction like 5/12, got {text!r}") from None


def _cmd_cyclic(args) -> int:
    op = args.cyclic_command
    if op == "lemma":
        e = CyclicEmbedding(args.k, args.n, args.e)
        f = CyclicEmbedding(args.k, args.n, args.f)
        b = lemma_solve(e, f)
        if args.format == "json":
            _emit({"schema": 1, "b": b})
        else:
            print(f"b = {b}  ({b} * {e.multiplier} = {f.multiplier} mod {args.n})")
    elif op == "amalgamate":
        f = CyclicEmbedding(args.k, args.m, args.f)
        g = CyclicEmbedding(args.k, args.n, args.g)
        f2, g2 = amalgamate(f, g)
        if args.format == "json":
            _emit(
                {
                    "schema": 1,
                    "target_order": f2.target_order,
                    "left_multiplier": f2.multiplier,
                    "right_multiplier": g2.multiplier,
                }
            )
        else:
            print(
                f"into Z_{f2.target_order}: left leg x -> {f2.multiplier}*x, "
                f"right leg x -> {g2.multiplier}*x (square commutes)"
            )
    elif op == "eta":
        vec = eta(args.m, args.l)
        if args.format == "json":
            _emit({"schema": 1, "vector": str(vec), "fraction": str(vec.recompose())})
        else:
            print(str(vec))
    elif op == "kapply":
        vec = k_apply(args.n, prufer_decompose(_parse_fraction(args.x)))
        if args.format == "json":
            _emit({"schema": 1, "vector": str(vec), "fraction": str(vec.recompose())})
        else:
            print(str(vec))
    elif op == "extend":
        c = extend_automorphism(args.b, args.k, args.n)
        if args.format == "json":
            _emit({"schema": 1, "c": c})
        else:
            print(f"c = {c}  (c = {args.b % args.k} mod {args.k}, unit mod {args.n})")
    elif op == "uniform":
        report = uniformly_homogeneous_cyclic(args.n)
        if args.format == "json":
            payload = report.to_json_dict()
            payload["schema"] = 1
            _emit(payload)
        else:
            for k, exists in report.sections:
                print(f"  subgroup of order {k}: section {'exists' if exists else 'MISSING'}")
            if report.ok:
                print(f"Z_{args.n} is uniformly homogeneous")
            else:
                print(
                    f"Z_{args.n} is NOT uniformly homogeneous: no homomorphic section "
                    f"for the subgroup of order {report.failing_k}"
                )
    else:  # pragma: no cover - argparse enforces choices
        raise InputError(f"unknown cyclic operation {op!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homstruct",
        description="homogeneity analysis for finite relational structures",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="increase verbosity")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    for name, fn, help_text in (
        ("check", _cmd_check, "full homogeneity report for a structure file"),
        ("aut", _cmd_aut, "automorphism group of a structure file"),
        ("age", _cmd_age, "isomorphism classes of induced substructures"),
        ("obstruction", _cmd_obstruction, "fixed-set obstruction of a homogeneous structure"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        add_format(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("search", help="exhaustively classify small digraphs")
    p.add_argument("--max-vertices", type=int, default=5)
    p.add_argument("--chunks", type=int, default=1)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--mask-range", default=None, help="restrict to START:STOP masks (required for n=6)")
    p.add_argument("--backend", choices=("numba", "numpy"), default=None)
    add_format(p)
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("verify-paper", help="run the built-in verification suite")
    add_format(p)
    p.set_defaults(fn=_cmd_verify_paper)

    p = sub.add_parser("cyclic", help="cyclic-group calculators")
    csub = p.add_subparsers(dest="cyclic_command", required=True)
    q = csub.add_parser("lemma", help="solve f = h o e for an automorphism h")
    for arg in ("k", "n", "e", "f"):
        q.add_argument(arg, type=int)
    add_format(q)
    q = csub.add_parser("amalgamate", help="complete a span of embeddings to a commuting cospan")
    for arg in ("k", "m", "n", "f", "g"):
        q.add_argument(arg, type=int)
    add_format(q)
    q = csub.add_parser("eta", help="embed an element of Z_m into the ambient group")
    q.add_argument("m", type=int)
    q.add_argument("l", type=int)
    add_format(q)
    q = csub.add_parser("kapply", help="apply the multiplier operator to a fraction mod 1")
    q.add_argument("n", type=int)
    q.add_argument("x", help="fraction a/d")
    add_format(q)
    q = csub.add_parser("extend", help="extend x -> b*x from Z_k to Z_n")
    for arg in ("b", "k", "n"):
        q.add_argument(arg, type=int)
    add_format(q)
    q = csub.add_parser("uniform", help="uniform homogeneity of Z_n via subgroup sections")
    q.add_argument("n", type=int)
    add_format(q)
    p.set_defaults(fn=_cmd_cyclic)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
