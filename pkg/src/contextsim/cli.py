"""Command-line front end: bell-check, simulate, liar, polytope.

Exit codes: 0 success, 2 usage, 3 parse, 4 validation, 5 internal.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__, canonical
from .classicality import (
    ATOMS,
    chsh_facets,
    correlation_membership,
    deterministic_vertices,
    kolmogorov_feasibility,
)
from .liar import build_entity, parse_start, trace
from .macro import ENTITIES, RunSpec, config_from_dict, default_config, run_entity
from .quantum import ImpossibleOutcome
from .report import fmt, table_csv, table_text, verdict_text
from .scenario import BehaviorTable, ValidationError, bell_verdict, correlation_vector

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_VALIDATION, EXIT_INTERNAL = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_USAGE) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}",
                       EXIT_PARSE) from None


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands ---------------------------------------------------------------

def cmd_bell_check(args) -> int:
    data = _read_json(args.table)
    table = BehaviorTable.from_mapping(data)
    E = correlation_vector(table)
    bell = bell_verdict(E)
    joint = kolmogorov_feasibility(table)
    hull = correlation_membership(E)
    if args.format == "json":
        out = canonical.dumps({
            "table": table.to_mapping(),
            "correlations": dict(zip(("e13", "e14", "e23", "e24"), E.as_tuple())),
            "bell": {"value": bell.value, "verdict": bell.label},
            "kolmogorov": joint.to_dict(),
            "classicality": hull.to_dict(),
            "version": __version__,
        })
    elif args.format == "csv":
        out = table_csv(table)
    else:
        out = "\n".join([
            table_text(table), "",
            f"bell     {fmt(bell.value)} ({bell.label}, bound 2)",
            f"hull     {verdict_text(hull)}",
            f"joint    {verdict_text(joint)}",
        ])
    _emit(args, out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.config:
        config = config_from_dict(args.entity, _read_json(args.config))
    else:
        config = default_config(args.entity)
    report = run_entity(args.entity, config, RunSpec(trials=args.trials, seed=args.seed),
                        workers=args.workers)
    if args.format == "json":
        out = report.to_json()
    elif args.format == "csv":
        out = report.to_csv()
    else:
        out = report.to_text()
    _emit(args, out)
    return EXIT_OK


def cmd_liar(args) -> int:
    try:
        start = parse_start(args.start)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    if args.steps < 0:
        raise CliError("--steps must be non-negative", EXIT_USAGE)
    if args.tau <= 0:
        raise CliError("--tau must be positive", EXIT_USAGE)
    entity = build_entity(args.variant, step_time=args.tau)
    try:
        prob, steps = trace(entity, start, args.steps)
    except ImpossibleOutcome:
        raise CliError(
            f"impossible outcome: sentence {start[0]} cannot be made "
            f"{'true' if start[1] else 'false'} from the initial state of variant {args.variant}",
            EXIT_VALIDATION) from None
    if args.format == "json":
        items = []
        for i, s in enumerate(steps):
            item = {"step": i, "label": s.assignment.label, **s.assignment.to_dict()}
            if args.dump_state:
                item["state"] = s.state.to_json()
            items.append(item)
        out = canonical.dumps({
            "variant": args.variant,
            "start": {"sentence": start[0], "value": start[1]},
            "probability": prob,
            "tau": float(args.tau),
            "steps": items,
        })
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "sentence1", "sentence2", "label"])
        for i, s in enumerate(steps):
            d = s.assignment.to_dict()
            w.writerow([i, d["sentence1"], d["sentence2"], s.assignment.label])
        out = buf.getvalue()
    else:
        lines = [f"variant {args.variant}, start {start[0]}:{'true' if start[1] else 'false'}, "
                 f"probability {prob:.12g}"]
        for i, s in enumerate(steps):
            lines.append(f"{i:>4}  {s.assignment.label}")
            if args.dump_state:
                amps = " ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in s.state.amplitudes)
                lines.append(f"      {amps}")
        out = "\n".join(lines)
    _emit(args, out)
    return EXIT_OK


def _parse_vector(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise CliError(f"--test needs four comma-separated numbers, got {text!r}", EXIT_USAGE)
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"--test: not a number list: {text!r}", EXIT_USAGE) from None


def cmd_polytope(args) -> int:
    verts = deterministic_vertices()
    result = {"vertices": [[int(x) for x in v] for v in verts]}
    membership = None
    if args.test is not None:
        E = _parse_vector(args.test)
        membership = correlation_membership(E)
        result["test"] = {
            "vector": list(E),
            "verdict": membership.to_dict(),
            "facets": [{"signs": list(s), "value": v} for s, v in chsh_facets(E)],
        }
    if args.format == "json":
        out = canonical.dumps(result)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["e13", "e14", "e23", "e24", "atoms"])
        for v in verts:
            atoms = " ".join(a.label for a in ATOMS if a.correlations() == tuple(int(x) for x in v))
            w.writerow([*(int(x) for x in v.as_tuple()), atoms])
        out = buf.getvalue()
    else:
        lines = ["deterministic correlation vertices (e13, e14, e23, e24):"]
        for v in verts:
            lines.append("  (" + ", ".join(f"{int(x):+d}" for x in v.as_tuple()) + ")")
        if membership is not None:
            lines.append("")
            lines.append("test (" + ", ".join(fmt(x) for x in result["test"]["vector"]) + "): "
                         + verdict_text(membership))
        out = "\n".join(lines)
    _emit(args, out)
    return EXIT_OK


# --- parser ----------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed (default 0)")
    p.add_argument("--trials", type=int, default=10_000, help="trials per coincidence experiment")
    p.add_argument("--config", help="entity configuration JSON file")
    p.add_argument("--output", help="write to this file instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="contextsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bell-check", parents=[common], help="evaluate a behavior table file")
    p.add_argument("table", help="behavior table JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_bell_check)

    p = sub.add_parser("simulate", parents=[common], help="simulate the vessels or soccer entity")
    p.add_argument("entity", choices=ENTITIES)
    p.add_argument("--workers", type=int, default=1, help="sampling threads (results do not depend on it)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("liar", parents=[common], help="trace a liar truth cycle")
    p.add_argument("--variant", choices=("A", "B", "C"), default="A")
    p.add_argument("--start", default="1:true", help="initial measurement, e.g. 1:true or 2:false")
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--tau", type=float, default=1.0, help="reasoning-step duration")
    p.add_argument("--dump-state", action="store_true", help="include every intermediate state vector")
    p.set_defaults(func=cmd_liar)

    p = sub.add_parser("polytope", parents=[common], help="list correlation vertices / test a vector")
    p.add_argument("--test", metavar="E13,E14,E23,E24")
    p.set_defaults(func=cmd_polytope)
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "--test -1,1,1,1" as two options
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--test" and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and len(argv[i + 1]) > 1 and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "."):
            out.append(f"--test={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"contextsim: {exc}", file=sys.stderr)
        return exc.code
    except ValidationError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        print(f"contextsim: validation error{where}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        print(f"contextsim: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
