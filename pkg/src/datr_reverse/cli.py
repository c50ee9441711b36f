"""Command-line front end: ``datr check|query|rquery|crosscheck``.

Exit codes depend only on the outcome class: 0 ok, 1 theory error,
2 usage error or malformed query, 3 cross-check failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Sequence
from dataclasses import dataclass

from .backbone import compile_theory, dump_rules
from .chart import reverse_query
from .crosscheck import crosscheck
from .errors import DatrError, DatrSyntaxError, LimitExceeded, TheoryError, Undefined
from .forward import DEFAULT_MAX_DEPTH, DEFAULT_MAX_PATH_LEN, EvalLimits, eval_query, parse_query
from .paths import format_path
from .syntax import Theory, parse_theory, validate_theory

EXIT_OK = 0
EXIT_THEORY = 1
EXIT_USAGE = 2
EXIT_CROSSCHECK = 3


@dataclass(frozen=True)
class RunConfig:
    theory_path: str
    max_path_len: int = DEFAULT_MAX_PATH_LEN
    max_depth: int = DEFAULT_MAX_DEPTH
    output_format: str = "text"
    trace: str | None = None

    @property
    def limits(self) -> EvalLimits:
        return EvalLimits(self.max_path_len, self.max_depth)


class _UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _default_max_path_len() -> int:
    env = os.environ.get("DATR_MAX_PATH_LEN")
    if env is None:
        return DEFAULT_MAX_PATH_LEN
    try:
        return _positive(env)
    except argparse.ArgumentTypeError as exc:
        raise _UsageError(f"DATR_MAX_PATH_LEN: {exc}") from None


def build_parser(default_max_path_len: int = DEFAULT_MAX_PATH_LEN) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theory", required=True, metavar="FILE", help="DATR theory file")
    common.add_argument("--max-path-len", type=_positive, default=default_max_path_len, metavar="N",
                        help="path length bound for both engines (default %(default)s)")
    common.add_argument("--max-depth", type=_positive, default=DEFAULT_MAX_DEPTH, metavar="N",
                        help="forward recursion depth bound (default %(default)s)")
    common.add_argument("--format", choices=("text", "json"), default="text", dest="output_format")
    common.add_argument("--trace", choices=("chart", "forward"), default=None,
                        help="write JSON-lines trace records to stderr")

    parser = argparse.ArgumentParser(prog="datr", description="Forward and reverse DATR queries.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="parse, validate and compile a theory")
    p.add_argument("--dump-rules", action="store_true", help="print the compiled backbone")

    p = sub.add_parser("query", parents=[common], help="evaluate Node:<path>")
    p.add_argument("query", help="query text, e.g. 'Sheep:<orth plur>'")

    p = sub.add_parser("rquery", parents=[common], help="find the queries that evaluate to a value")
    p.add_argument("value", nargs="?", default=None, help="whitespace-separated atoms")
    p.add_argument("--empty", action="store_true", help="query the empty value")

    p = sub.add_parser("crosscheck", parents=[common], help="compare reverse answers with forward evaluation")
    p.add_argument("--max-len", type=int, default=4, metavar="N",
                   help="enumerate query paths up to this length (default %(default)s)")
    return parser


def load_theory(path: str) -> Theory:
    try:
        with open(path, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        raise TheoryError(f"cannot read {path}: {exc.strerror}") from None
    return parse_theory(source)


def _trace_writer(stream):
    def write(record: dict) -> None:
        stream.write(json.dumps(record, default=str) + "\n")
    return write


def _emit_json(obj, out) -> None:
    out.write(json.dumps(obj, indent=2) + "\n")


def cmd_check(config: RunConfig, dump: bool, out, err) -> int:
    theory = load_theory(config.theory_path)
    diagnostics = validate_theory(theory)
    rules = compile_theory(theory)
    for d in diagnostics:
        err.write(f"{d}\n")
    paths = {node: sorted(theory.node_index[node], key=lambda p: (len(p), p)) for node in theory.nodes}
    if config.output_format == "json":
        payload = {
            "nodes": len(theory.nodes),
            "sentences": len(theory.sentences),
            "rules": len(rules),
            "paths": {n: [list(p) for p in ps] for n, ps in paths.items()},
            "diagnostics": [{"code": d.code, "message": d.message, "node": d.node} for d in diagnostics],
        }
        if dump:
            payload["backbone"] = json.loads(dump_rules(rules.rules, "json"))
        _emit_json(payload, out)
        return EXIT_OK
    out.write(f"{len(theory.nodes)} nodes, {len(theory.sentences)} sentences, {len(rules)} rules\n")
    for node, ps in paths.items():
        out.write(f"{node}: {' '.join(format_path(p) for p in ps)}\n")
    if dump:
        out.write(dump_rules(rules.rules) + "\n")
    return EXIT_OK


def cmd_query(config: RunConfig, text: str, out, err) -> int:
    query = parse_query(text)
    theory = load_theory(config.theory_path)
    trace = _trace_writer(err) if config.trace == "forward" else None
    status, value, reason = "ok", None, None
    try:
        value = eval_query(theory, query, config.limits, trace)
    except Undefined as exc:
        status, reason = "undefined", str(exc)
    except LimitExceeded as exc:
        status, reason = "limit", str(exc)
    if config.output_format == "json":
        _emit_json({"query": str(query), "status": status,
                    "value": list(value) if value is not None else None, "reason": reason}, out)
    elif status == "ok":
        out.write(" ".join(value) + "\n")
    else:
        out.write("UNDEFINED\n" if status == "undefined" else "LIMIT\n")
        err.write(f"{reason}\n")
    return EXIT_OK


def cmd_rquery(config: RunConfig, value_text: str | None, empty: bool, out, err) -> int:
    if empty == (value_text is not None):
        raise _UsageError("give either a value or --empty")
    value = () if empty else tuple(value_text.split())
    if not value and not empty:
        raise _UsageError("empty value; use --empty to query the empty value")
    theory = load_theory(config.theory_path)
    rules = compile_theory(theory)
    trace = _trace_writer(err) if config.trace == "chart" else None
    result = reverse_query(rules, value, config.limits, trace)
    answers = sorted(result.answers, key=lambda a: a.sort_key())
    for d in result.diagnostics:
        err.write(f"warning: {d}\n")
    if config.output_format == "json":
        _emit_json({"value": list(value), "answers": [a.as_json() for a in answers],
                    "suppressed": result.suppressed, "diagnostics": result.diagnostics}, out)
    else:
        for a in answers:
            out.write(f"{a}\n")
    return EXIT_OK


def cmd_crosscheck(config: RunConfig, max_len: int, out, err) -> int:
    if max_len < 0:
        raise _UsageError("--max-len must not be negative")
    theory = load_theory(config.theory_path)
    report = crosscheck(theory, max_len, config.limits)
    if config.output_format == "json":
        _emit_json(report.as_json(), out)
    else:
        out.write(report.summary() + "\n")
    return EXIT_OK if report.ok else EXIT_CROSSCHECK


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        parser = build_parser(_default_max_path_len())
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_OK if exc.code == 0 else EXIT_USAGE
        config = RunConfig(args.theory, args.max_path_len, args.max_depth, args.output_format, args.trace)
        if args.command == "check":
            return cmd_check(config, args.dump_rules, out, err)
        if args.command == "query":
            return cmd_query(config, args.query, out, err)
        if args.command == "rquery":
            return cmd_rquery(config, args.value, args.empty, out, err)
        return cmd_crosscheck(config, args.max_len, out, err)
    except _UsageError as exc:
        err.write(f"datr: error: {exc}\n")
        return EXIT_USAGE
    except DatrSyntaxError as exc:
        err.write(f"datr: error: {exc}\n")
        # A malformed query is a usage error; a malformed theory is not.
        return EXIT_USAGE if exc.line is None else EXIT_THEORY
    except DatrError as exc:
        err.write(f"datr: error: {type(exc).__name__}: {exc}\n")
        return EXIT_THEORY


if __name__ == "__main__":
    sys.exit(main())
