"""Command-line front end: census tables, model growth, order completion,
property suites and DOT export.

Exit codes: 0 success, 2 usage or validation error, 3 I/O error.  Every
run is reproducible from its flags and seed; DENDRITE_SEED supplies the
default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .checks import SUITES, run_suites
from .labels import Signature, label_token
from .labelled_trees import LabelledTree, enumerate_types
from .model import DendriteModel, new_model
from .semilinear import Poset, completion


def _default_seed() -> int:
    try:
        return int(os.environ.get("DENDRITE_SEED", "0"))
    except ValueError:
        return 0


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_census(args) -> int:
    try:
        sig = Signature.parse(args.signature)
    except ValueError as exc:
        return _fail(str(exc), 2)
    if args.arity < 1:
        return _fail("arity must be >= 1", 2)
    types = enumerate_types(args.arity, sig, args.distinct)
    if args.format == "json":
        out = {
            "signature": sig.to_json(),
            "arity": args.arity,
            "distinct": args.distinct,
            "count": len(types),
            "types": [t.to_json_obj() for t in types],
        }
        print(json.dumps(out, indent=2, sort_keys=True))
        return 0
    print(f"signature {{{sig.token()}}}  arity {args.arity}  distinct {'yes' if args.distinct else 'no'}")
    print(f"types {len(types)}")
    rows = []
    for i, t in enumerate(types):
        labels = " ".join(f"{v}:{label_token(t.label[v])}" for v in t.vertices)
        edges = " ".join(f"{u}-{v}" for u, v in t.edges) or "-"
        marks = ",".join(str(m) for m in t.marks)
        rows.append((str(i), labels, edges, marks))
    widths = [max(len(r[c]) for r in rows + [("idx", "labels", "edges", "marks")]) for c in range(4)]
    header = ("idx", "labels", "edges", "marks")
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for r in rows:
        print("  ".join(f.ljust(w) for f, w in zip(r, widths)).rstrip())
    return 0


def cmd_grow(args) -> int:
    try:
        sig = Signature.parse(args.signature)
    except ValueError as exc:
        return _fail(str(exc), 2)
    if args.steps < 0:
        return _fail("steps must be >= 0", 2)
    seed = args.seed if args.seed is not None else _default_seed()
    model = new_model(sig, seed)
    model.grow_random(args.steps)
    text = json.dumps(model.to_json_obj(), indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(args.out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        return _fail(str(exc), 3)
    return 0


def cmd_complete(args) -> int:
    try:
        with open(args.poset) as fh:
            obj = json.load(fh)
    except OSError as exc:
        return _fail(str(exc), 3)
    except json.JSONDecodeError as exc:
        return _fail(f"invalid JSON: {exc}", 2)
    try:
        poset = Poset.from_json_obj(obj)
        comp = completion(poset)
    except (ValueError, KeyError, TypeError) as exc:
        return _fail(str(exc), 2)
    print(json.dumps(comp.to_json_obj(), indent=2, sort_keys=True))
    return 0


def cmd_check(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    names = SUITES if args.suite == "all" else (args.suite,)
    report = run_suites(names, seed)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0 if not report["failures"] else 1


def cmd_export_dot(args) -> int:
    try:
        with open(args.input) as fh:
            obj = json.load(fh)
    except OSError as exc:
        return _fail(str(exc), 3)
    except json.JSONDecodeError as exc:
        return _fail(f"invalid JSON: {exc}", 2)
    try:
        if isinstance(obj, dict) and "log" in obj and "signature" in obj:
            sys.stdout.write(DendriteModel.from_json_obj(obj).to_dot())
        elif isinstance(obj, dict) and "vertices" in obj and "marks" in obj:
            sys.stdout.write(LabelledTree.from_json_obj(obj).to_dot())
        else:
            return _fail("input is neither a model nor a labelled tree", 2)
    except (ValueError, KeyError, TypeError) as exc:
        return _fail(str(exc), 2)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dendrites",
        description="Exact combinatorics of generalised Wazewski dendrites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    census = sub.add_parser("census", help="count and list orbit types of p-tuples")
    census.add_argument("--signature", required=True, help='branch orders, e.g. "3" or "3,inf"')
    census.add_argument("--arity", type=int, required=True)
    census.add_argument("--distinct", action="store_true", help="marks name pairwise distinct points")
    census.add_argument("--format", choices=("table", "json"), default="table")
    census.set_defaults(func=cmd_census)

    grow = sub.add_parser("grow", help="grow a seeded model and write it as JSON")
    grow.add_argument("--signature", required=True)
    grow.add_argument("--steps", type=int, default=0)
    grow.add_argument("--seed", type=int, default=None)
    grow.add_argument("--out", default=None, help="output file (stdout if omitted)")
    grow.set_defaults(func=cmd_grow)

    complete = sub.add_parser("complete", help="complete a semi-linear order by full down-chains")
    complete.add_argument("poset", help="poset JSON file")
    complete.set_defaults(func=cmd_complete)

    check = sub.add_parser("check", help="run the seeded property suites")
    check.add_argument("--suite", choices=("all",) + SUITES, default="all")
    check.add_argument("--seed", type=int, default=None)
    check.set_defaults(func=cmd_check)

    export = sub.add_parser("export-dot", help="render a model or tree JSON file as DOT")
    export.add_argument("input", help="model or labelled-tree JSON file")
    export.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
