"""Command-line interface: ``boolcube <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Any, Callable, Sequence

from boolcube import chebyshev, search, suites
from boolcube.cube import (
    BooleanFunction,
    FourierSpectrum,
    homogeneous_part,
    inverse_transform,
    subset_to_mask,
    walsh_transform,
)
from boolcube.errors import CapacityError
from boolcube.formats import dump_spectrum, dump_table, load_spectrum, load_table
from boolcube.inequalities import bh_ratio
from boolcube.report import DEFAULT_TOL, reports_to_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

GENERATOR_HELP = "maj:D, const:N:C, chi:N:i,j,..., dictator:N:I, random:N:D:SEED"


class UsageError(Exception):
    pass


def _default_threads() -> int:
    env = os.environ.get("BSPEC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"BSPEC_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def generate(spec: str) -> BooleanFunction:
    """Build a function from a generator spec such as ``maj:3`` or ``chi:4:1,3``."""
    kind, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "maj" and len(args) == 1:
            return search.majority(int(args[0]))
        if kind == "const" and len(args) == 2:
            return BooleanFunction.constant(int(args[0]), float(args[1]))
        if kind == "chi" and len(args) == 2:
            n = int(args[0])
            subset = [int(i) for i in args[1].split(",") if i]
            return inverse_transform(FourierSpectrum(n, {subset_to_mask(subset): 1.0}))
        if kind == "dictator" and len(args) == 2:
            n = int(args[0])
            return inverse_transform(FourierSpectrum(n, {subset_to_mask([int(args[1])]): 1.0}))
        if kind == "random" and len(args) == 3:
            n, d, seed = (int(a) for a in args)
            return inverse_transform(search.random_spectrum(n, d, seed))
    except CapacityError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad generator {spec!r}: {exc}") from None
    raise UsageError(f"bad generator {spec!r}; expected one of {GENERATOR_HELP}")


def _read_function(args) -> BooleanFunction:
    if args.gen:
        return generate(args.gen)
    if args.spectrum:
        with open(args.spectrum) as fh:
            return inverse_transform(load_spectrum(fh.read()))
    if args.input is None:
        raise UsageError("give a truth-table file, --gen or --spectrum")
    if args.input == "-":
        return load_table(sys.stdin.read())
    with open(args.input) as fh:
        return load_table(fh.read())


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def cmd_spectrum(args) -> int:
    s = walsh_transform(_read_function(args))
    if args.degree:
        levels = sorted({int(v) for v in args.degree.split(",")})
        coeffs: dict[int, float] = {}
        for m in levels:
            coeffs.update(homogeneous_part(s, m).coeffs)
        s = FourierSpectrum(s.n, coeffs)
    _emit(args, dump_spectrum(s))
    return EXIT_OK


def cmd_synth(args) -> int:
    with open(args.input) if args.input != "-" else sys.stdin as fh:
        s = load_spectrum(fh.read())
    _emit(args, dump_table(inverse_transform(s)))
    return EXIT_OK


def cmd_bh(args) -> int:
    rep = bh_ratio(walsh_transform(_read_function(args)))
    _emit(args, reports_to_csv([rep]) if args.csv else rep.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    params = suites.SuiteParams(n=args.n, d=args.d, seed=args.seed, trials=args.trials, tol=args.tol)
    result = suites.run_suite(args.suite, params, threads=args.threads)
    if args.csv:
        _emit(args, reports_to_csv(result.reports))
    else:
        _emit(args, json.dumps(result.to_dict(timing=args.timing), indent=1))
    print(f"{args.suite}: {result.counts} in {result.wall_time:.3f}s", file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_FAIL


def cmd_search(args) -> int:
    cfg = search.SearchConfig(
        n=args.n,
        d=args.d,
        strategy=args.strategy,
        iterations=args.iters,
        seed=args.seed,
        homogeneous_only=args.homogeneous,
    )
    if args.csv:
        rows = search.ratio_table(range(1, args.d + 1), range(1, args.n + 1), cfg)
        text = _csv_text(search.TABLE_COLUMNS, [[r[c] for c in search.TABLE_COLUMNS] for r in rows])
        with open(args.csv, "w", newline="") as fh:
            fh.write(text)
    w = search.search_bh_witness(cfg)
    _emit(args, json.dumps(w.to_dict()))
    return EXIT_OK


CHEB_COLUMNS = ("quantity", "d", "m", "value")


def cmd_cheb(args) -> int:
    rows = chebyshev.cheb_rows(args.d, args.d_max)
    _emit(args, _csv_text(CHEB_COLUMNS, rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--threads", type=int, default=None, help="worker cap (default: $BSPEC_THREADS or all cores)")
    common.add_argument("--out", help="write output here instead of stdout")

    def format_args(p: argparse.ArgumentParser) -> None:
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="JSON output (default)")
        fmt.add_argument("--csv", action="store_true", help="CSV output")

    def source_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", nargs="?", help="truth-table file ('-' for stdin)")
        p.add_argument("--gen", help=f"generator spec: {GENERATOR_HELP}")
        p.add_argument("--spectrum", help="spectrum JSON file")

    parser = argparse.ArgumentParser(prog="boolcube", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="Fourier-Walsh spectrum as JSON")
    source_args(p)
    p.add_argument("--degree", help="comma-separated levels to keep")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("synth", parents=[common], help="truth table from spectrum JSON")
    p.add_argument("input", help="spectrum JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bh", parents=[common], help="Bohnenblust-Hille quotient report")
    source_args(p)
    format_args(p)
    p.set_defaults(func=cmd_bh)

    p = sub.add_parser("verify", parents=[common], help="run a seeded verification suite")
    p.add_argument("suite", choices=suites.SUITE_NAMES)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON")
    format_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="search for large BH quotients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--strategy", choices=search.STRATEGIES, default="sign-flip-local-search")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--homogeneous", action="store_true", help="search level d only")
    p.add_argument("--csv", help="also write the ratio table for d' <= d, n' <= n as CSV here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("cheb", parents=[common], help="Chebyshev, psi and Markov data as CSV")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--d-max", type=int, default=None, help="growth trace length (default: d)")
    p.set_defaults(func=cmd_cheb)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handler: Callable[[Any], int] = args.func
    try:
        if args.threads is None:
            args.threads = _default_threads()
        return handler(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
