"""``archmon``: analyze, check, enumerate and export finite commutative monoids.

Inputs are monoid JSON files, recipe strings such as ``dsum(trunc(3),trunc(3))``,
or ``-`` for stdin.  Exit codes: 2 for unparseable arguments or inputs, 3 for
an invalid monoid (the witness goes to stderr), 1 when a statement check
fails, 0 otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import export as ex
from .core import MonoidError
from .gen import BoundExceeded, RecipeError, enumerate_monoids, random_monoid
from .verify import UnknownStatementId, instance, run_suite, sweep

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _ParseError(message)


class _ParseError(Exception):
    pass


def _orders(text: str) -> list:
    if "-" in text:
        lo, hi = text.split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="archmon", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("input", nargs="?", help="monoid file, recipe string, or - for stdin")
        s.add_argument("--seed", type=int, help="use a random monoid from this seed instead of an input")
        s.add_argument("--out", help="write to this path instead of stdout")
        return s

    with_input("analyze", "full report: orders, blocks, Gamma, SA lattice, flocks, strata")
    for name, help_ in (("gamma", "archimedean classes and Gamma"), ("sa", "SA-submonoid lattice"),
                        ("flocks", "entourages and maximal flocks"), ("strata", "layers and heights")):
        s = with_input(name, help_)
        s.add_argument("--format", choices=("json", "dot"), default="json")
        if name == "sa":
            s.add_argument("--class", dest="cls", type=int, help="draw the diagram around one class (dot)")
    c = with_input("check", "run the statement registry")
    c.add_argument("--only", help="comma-separated statement ids")
    c.add_argument("--orders", help="sweep all monoids of these orders instead, e.g. 1-4")
    c.add_argument("--jobs", type=int, default=1)
    e = sub.add_parser("enum", help="canonical monoids of one order")
    e.add_argument("--order", type=int, required=True)
    e.add_argument("--out", help="directory for one JSON file per monoid")
    e.add_argument("--method", choices=("backtrack", "filter"), default="backtrack")
    x = with_input("export", "write one view as JSON or DOT")
    x.add_argument("--format", choices=("json", "dot"), default="json")
    x.add_argument("--view", choices=ex.VIEWS, default="gamma")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(args):
    if args.seed is not None:
        return ex.resolve_input("-", _Lines(json.dumps(ex.monoid_json(random_monoid(args.seed)))))
    if args.input is None:
        raise _ParseError("an input (file, recipe, or -) is required")
    return ex.resolve_input(args.input)


class _Lines:
    def __init__(self, text):
        self.text = text

    def read(self):
        return self.text


def _run(args) -> int:
    cmd = args.command
    if cmd == "enum":
        monoids = enumerate_monoids(args.order, args.method)
        if args.out:
            d = Path(args.out)
            d.mkdir(parents=True, exist_ok=True)
            for M in monoids:
                (d / f"{M.name}.json").write_text(ex.dump_monoid(M))
        else:
            for M in monoids:
                sys.stdout.write(json.dumps(ex.monoid_json(M), sort_keys=True) + "\n")
        return EXIT_OK
    if cmd == "check" and args.orders:
        report = sweep(_orders(args.orders), args.only or "all", args.out, args.jobs)
        sys.stdout.write(json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n")
        return EXIT_FAIL if report.fail_count else EXIT_OK
    O = _load(args)
    if cmd == "analyze":
        _emit(ex.analysis_text(O), args.out)
    elif cmd == "check":
        rep = run_suite(instance(O), args.only or "all")
        _emit(rep.dumps() + "\n", args.out)
        return EXIT_FAIL if rep.failed else EXIT_OK
    elif cmd == "export":
        _emit(ex.export(O, args.view, args.format), args.out)
    elif cmd == "sa" and args.format == "dot":
        _emit(ex.sa_dot(O, args.cls), args.out)
    else:
        view = {"gamma": "gamma", "sa": "sa", "flocks": "flock", "strata": "strata"}[cmd]
        _emit(ex.export(O, view, args.format), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except (_ParseError, RecipeError, ex.InputError, UnknownStatementId, BoundExceeded) as e:
        sys.stderr.write(f"archmon: {e}\n")
        return EXIT_PARSE
    except MonoidError as e:
        w = list(e.witness) if getattr(e, "witness", None) else []
        sys.stderr.write(f"archmon: invalid monoid: {e}\n")
        sys.stderr.write(json.dumps({"error": type(e).__name__, "witness": w}) + "\n")
        return EXIT_INVALID
    except json.JSONDecodeError as e:
        sys.stderr.write(f"archmon: bad JSON: {e}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
