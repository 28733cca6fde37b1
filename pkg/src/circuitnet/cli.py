"""Command-line interface.

Exit codes: 0 success, 1 search did not reach its target, 2 usage or parse
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .core import ContractViolation, StateVector, TruthTableParseError, analyze, parse_truth_table
from .enumeration import emit_histogram, exhaustive_sweep, sample_sweep, sweep
from .export import to_dot
from .ga import GaConfig, evolve

EXIT_OK, EXIT_NO_CONVERGENCE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

FORMATS = {
    "analyze": ("text", "json"),
    "enumerate": ("csv", "json"),
    "search": ("json",),
    "export": ("dot",),
}


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default: 0)")
    common.add_argument("--threads", type=_positive, default=None,
                        help="worker threads (default: available CPUs); never changes results")
    common.add_argument("--format", choices=["csv", "json", "dot", "text"], default=None,
                        help="output format; default depends on the subcommand")
    common.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="circuitnet",
        description="Analyze autonomous boolean shift-register networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="classify every state of one function")
    p.add_argument("--n", type=int, required=True, help="number of variables")
    p.add_argument("--table", required=True, help="2**n binary digits in row order, or 0x-prefixed hex")

    p = sub.add_parser("enumerate", parents=[common], help="census of max cycle and Garden-of-Eden counts")
    p.add_argument("--n", type=int, required=True, help="number of variables (2-4 exhaustive)")
    p.add_argument("--sample", type=_positive, default=None, metavar="K",
                   help="analyze K random functions instead of all of them")
    p.add_argument("--exhaustive-n5", action="store_true",
                   help="allow the full 2**32-function sweep at n=5 (slow)")
    p.add_argument("--checkpoint", default=None, help="checkpoint file for --exhaustive-n5")
    p.add_argument("--exact-periods", action="store_true",
                   help="tally full-length cycles at 2**n instead of 2**n - 1")

    p = sub.add_parser("search", parents=[common], help="genetic search for a target (r, d)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target-r", type=int, required=True, help="wanted maximum cycle length")
    p.add_argument("--target-d", type=int, required=True, help="wanted Garden-of-Eden count")
    p.add_argument("--m", type=int, default=None, help="fitness offset (default: 2^2n + 2^(2n-2) + 1)")
    p.add_argument("--population", type=_positive, default=1000)
    p.add_argument("--elite", type=_positive, default=10)
    p.add_argument("--mutation-rate", type=float, default=0.01)
    p.add_argument("--max-generations", type=int, default=10_000)
    p.add_argument("--fitness-mode", choices=["penalty", "printed", "r_only"], default="penalty")
    p.add_argument("--trace-every", type=_positive, default=1,
                   help="keep every k-th generation in fitness_trace")

    p = sub.add_parser("export", parents=[common], help="write the state-transition diagram as DOT")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--table", required=True)
    return parser


def _tuple_str(n: int, code: int) -> str:
    return "(" + ",".join(map(str, StateVector(n, code).bits)) + ")"


def _analyze_report(args) -> str:
    f = parse_truth_table(args.table, args.n)
    a = analyze(f)
    if args.format == "json":
        return json.dumps({
            "n": f.n,
            "table": f.to_binary(),
            "hex": f.to_hex(),
            "cycles": [list(c) for c in a.cycles],
            "max_cycle_r": a.max_cycle_r,
            "garden_of_eden": a.garden_of_eden,
            "goe_count_d": a.goe_count_d,
            "transient": a.transient_states,
            "successor": list(a.successor),
        }) + "\n"
    lines = [
        f"n: {f.n}",
        f"table: {f.to_binary()} ({f.to_hex()})",
        f"cycles: {len(a.cycles)}",
    ]
    for c in a.cycles:
        lines.append(f"  length {len(c)}: " + " -> ".join(map(str, c))
                     + "   " + " -> ".join(_tuple_str(f.n, s) for s in c))
    lines.append(f"max_cycle_r: {a.max_cycle_r}")
    goe = a.garden_of_eden
    lines.append("garden_of_eden: " + (" ".join(f"{s} {_tuple_str(f.n, s)}" for s in goe) or "none"))
    lines.append(f"goe_count_d: {a.goe_count_d}")
    lines.append("transient: " + (" ".join(map(str, a.transient_states)) or "none"))
    return "\n".join(lines) + "\n"


def _enumerate(args) -> str:
    fold = not args.exact_periods
    if args.sample is not None:
        if args.n < 2:
            raise UsageError("--n must be >= 2")
        hist = sample_sweep(args.n, args.sample, seed=args.seed, threads=args.threads, fold_full_cycle=fold)
    elif 2 <= args.n <= 4:
        hist = sweep(args.n, threads=args.threads, fold_full_cycle=fold)
    elif args.n == 5 and args.exhaustive_n5:
        hist = exhaustive_sweep(5, checkpoint=args.checkpoint, threads=args.threads, fold_full_cycle=fold)
    else:
        raise UsageError(f"exhaustive enumeration is limited to 2 <= n <= 4; use --sample K"
                         f"{' or --exhaustive-n5' if args.n == 5 else ''} for n={args.n}")
    return emit_histogram(hist, args.format)


def _search(args) -> tuple[str, int]:
    try:
        cfg = GaConfig(
            n=args.n, target_r=args.target_r, target_d=args.target_d, m=args.m,
            population=args.population, elite_count=args.elite, mutation_rate=args.mutation_rate,
            max_generations=args.max_generations, seed=args.seed,
            fitness_mode=args.fitness_mode, trace_every=args.trace_every,
        )
    except ContractViolation as exc:
        raise UsageError(str(exc)) from exc
    result = evolve(cfg, threads=args.threads or (os.cpu_count() or 1))
    return result.to_json() + "\n", EXIT_OK if result.success else EXIT_NO_CONVERGENCE


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    allowed = FORMATS[args.command]
    if args.format is None:
        args.format = allowed[0]
    elif args.format not in allowed:
        parser.error(f"{args.command} supports --format {'|'.join(allowed)}")

    code = EXIT_OK
    try:
        if args.command == "analyze":
            text = _analyze_report(args)
        elif args.command == "enumerate":
            text = _enumerate(args)
        elif args.command == "search":
            text, code = _search(args)
        else:
            text = to_dot(parse_truth_table(args.table, args.n))
    except (UsageError, TruthTableParseError, ContractViolation) as exc:
        print(f"circuitnet {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        _write(text, args.output)
    except OSError as exc:
        print(f"circuitnet {args.command}: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
