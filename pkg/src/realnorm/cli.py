"""Command-line interface.

Exit codes: 0 success, 1 negative answer (invalid, degenerate, not
symplectic, unclassifiable), 2 usage or parse error, 3 algorithmic abort.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import arcs, cuts, moves, render, strata
from .errors import (
    AmbiguousCollision,
    DegenerateProjection,
    InvalidInput,
    InvalidMove,
    PreconditionError,
    RealnormError,
    TerminationViolation,
    Unclassifiable,
)

OK, NEGATIVE, USAGE, ABORT = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc


def _load_diagram(path: str) -> cuts.CutDiagram:
    try:
        return cuts.CutDiagram.from_json(_load_json(path))
    except (InvalidInput, TypeError, KeyError) as exc:
        raise _UsageError(f"{path}: {exc}") from exc


def _load_metric(path: str) -> moves.MetricArcDiagram:
    d = _load_diagram(path)
    problems = cuts.validate(d, require_generic=False)
    if problems:
        raise PreconditionError("; ".join(problems))
    return moves.MetricArcDiagram.from_cut_diagram(d)


def _matrix_str(M) -> str:
    return json.dumps([list(r) for r in M], separators=(",", ":"))


def cmd_enumerate(args, out) -> int:
    if not 1 <= args.genus <= 4:
        raise _UsageError("--genus must lie in 1..4")
    n = 2 * args.genus
    if args.count_only:
        if args.nondegenerate:
            count = arcs.count_nondegenerate(args.genus, workers=args.workers)
        else:
            count = arcs.double_factorial(2 * n - 1)
        out.write(f"{count}\n")
        return OK
    for m in arcs.enumerate_matchings(n):
        if args.nondegenerate and not arcs.is_nondegenerate(m):
            continue
        out.write(m.dumps() + "\n")
    return OK


def cmd_check(args, out) -> int:
    d = _load_diagram(args.file)
    problems = cuts.validate(d)
    out.write(f"valid: {'no' if problems else 'yes'}\n")
    for p in problems:
        out.write(f"  {p}\n")
    try:
        report = cuts.build_surface(d)
    except RealnormError as exc:
        out.write(f"surface: unavailable ({exc})\n")
        return NEGATIVE
    poles = ",".join(str(k) for k in report.pole_orders)
    kind = "nondegenerate" if report.nondegenerate else "degenerate"
    out.write(f"arc diagram: {report.matching.dumps()}\n")
    out.write(f"genus {report.genus}, poles [{poles}], {kind}\n")
    out.write("periods: " + ", ".join(str(v) for v in report.periods) + "\n")
    lat = cuts.lattice_summary(d)
    out.write(f"lattice rank: {lat['rank']}\n")
    out.write(f"discrete: {'yes' if lat['discrete'] else 'no'}\n")
    out.write(f"totally incommensurable: {'yes' if lat['totally_incommensurable'] else 'no'}\n")
    if problems:
        return NEGATIVE
    if args.require_single_pole and report.n_poles != 1:
        out.write("more than one pole\n")
        return NEGATIVE
    return OK


def cmd_normalize(args, out) -> int:
    m = _load_metric(args.file)
    try:
        caravan, M, trace = moves.caravan_normalize(m)
    except AmbiguousCollision as exc:
        sys.stderr.write(f"ambiguous collision: {exc}\n")
        if exc.trace is not None:
            for ev in exc.trace.events[-5:]:
                sys.stderr.write(json.dumps(ev.to_json(), sort_keys=True) + "\n")
        return ABORT
    except TerminationViolation as exc:
        sys.stderr.write(f"termination violated: {exc}\n")
        return ABORT
    out.write(caravan.to_cut_diagram().dumps())
    sys.stderr.write(f"matrix: {_matrix_str(M)}\n")
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(trace.to_jsonl())
    if args.matrix:
        with open(args.matrix, "w", encoding="utf-8") as fh:
            fh.write(_matrix_str(M) + "\n")
    return OK


def cmd_leaf(args, out) -> int:
    try:
        m1, m2 = _load_metric(args.file1), _load_metric(args.file2)
        report = moves.leaf_obstruction(m1, m2)
    except (PreconditionError, DegenerateProjection, InvalidMove) as exc:
        sys.stderr.write(f"precondition failed: {exc}\n")
        return USAGE
    out.write(f"matrix: {_matrix_str(report.matrix)}\n")
    out.write(f"det: {report.det}\n")
    if report.symplectic:
        out.write("symplectic: yes\n")
        return OK
    out.write("symplectic: no (the diagrams lie in different components of the leaf)\n")
    return NEGATIVE


def cmd_classify(args, out) -> int:
    try:
        cfg = strata.from_json(_load_json(args.file))
    except (InvalidInput, TypeError, KeyError) as exc:
        raise _UsageError(f"{args.file}: {exc}") from exc
    try:
        label = strata.classify(cfg)
    except Unclassifiable as exc:
        sys.stderr.write(f"unclassifiable: {exc}\n")
        return NEGATIVE
    out.write(json.dumps(label.to_json(), sort_keys=True) + "\n")
    return OK


def cmd_render(args, out) -> int:
    obj = _load_json(args.file)
    try:
        if isinstance(obj, dict) and "kind" in obj:
            svg = render.render_configuration(strata.from_json(obj))
        else:
            svg = render.render_cut_diagram(cuts.CutDiagram.from_json(obj))
    except (InvalidInput, TypeError, KeyError) as exc:
        raise _UsageError(f"{args.file}: {exc}") from exc
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(svg)
    else:
        out.write(svg)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realnorm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list or count arc diagrams with 2g arcs")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--nondegenerate", action="store_true")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", help="validate a cut diagram and describe its surface")
    p.add_argument("file")
    p.add_argument("--require-single-pole", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("normalize", help="bring a diagram to caravan form")
    p.add_argument("file")
    p.add_argument("--trace")
    p.add_argument("--matrix")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("leaf", help="compare two diagrams with the same period lattice")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=cmd_leaf)

    p = sub.add_parser("classify-g1", help="stratum of a genus-one configuration")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("render", help="draw a diagram as SVG")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and USAGE
    try:
        return args.func(args, out)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except PreconditionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return NEGATIVE
    except (DegenerateProjection, InvalidMove) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return NEGATIVE
    except RealnormError as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return ABORT


if __name__ == "__main__":
    sys.exit(main())
