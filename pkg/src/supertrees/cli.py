"""Command-line front end: solve, verify and generate instances."""

from __future__ import annotations

import argparse
import json
import sys

from .generate import format_instance
from .masp import MaspSolver, masp_rooted, masp_unrooted
from .mcsp import McspSolver, mcsp_rooted, mcsp_unrooted
from .oracle import DEFAULT_CAP, brute_masp, brute_mcsp
from .result import InfeasibleInputError
from .trees import NewickError, is_agreement_supertree, is_compatible_supertree, parse_instance

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_MISMATCH = 4


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; 2 is reserved for Newick errors here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="supertrees",
        description="Maximum agreement (masp) or compatible (mcsp) supertree of a few input trees.",
    )
    p.add_argument("--problem", choices=("masp", "mcsp"), default="masp")
    p.add_argument("--mode", choices=("rooted", "unrooted"), default="rooted")
    p.add_argument("--input", metavar="FILE", help="one Newick tree per line ('-' for stdin)")
    p.add_argument("--verify", action="store_true", help="cross-check the size against the brute-force oracle")
    p.add_argument("--stats", action="store_true", help="print solver statistics as JSON on stderr")
    p.add_argument("--dump-states", action="store_true", help="print every memoized state on stderr")
    p.add_argument("--oracle-cap", type=int, metavar="N", help="largest label count the oracle accepts")

    gen = p.add_argument_group("instance generation (writes an instance instead of solving)")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--gen-k", type=int, default=2, metavar="K", help="number of trees (default 2)")
    gen.add_argument("--gen-n", type=int, default=6, metavar="N", help="label universe size (default 6)")
    gen.add_argument("--gen-d", type=int, default=3, metavar="D", help="maximum degree (default 3)")
    gen.add_argument("--output", metavar="FILE", help="where to write the generated instance (default stdout)")
    return p


def _solve(problem: str, instance):
    if problem == "masp":
        solver = MaspSolver(instance)
        run = masp_rooted if instance.rooted else masp_unrooted
    else:
        solver = McspSolver(instance)
        run = mcsp_rooted if instance.rooted else mcsp_unrooted
    return run(instance, solver), solver


def _generate(args, out) -> int:
    try:
        text = format_instance(args.seed, args.gen_k, args.gen_n, args.gen_d, args.mode)
    except ValueError as err:
        print(f"supertrees: {err}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)

    if args.seed is not None:
        if args.input:
            print("supertrees: --seed generates an instance and cannot be combined with --input", file=sys.stderr)
            return EXIT_USAGE
        return _generate(args, out)
    if not args.input:
        print("supertrees: one of --input or --seed is required", file=sys.stderr)
        return EXIT_USAGE

    try:
        text = _read(args.input)
    except OSError as err:
        print(f"supertrees: cannot read {args.input}: {err.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        instance = parse_instance(text, args.mode)
    except NewickError as err:
        print(f"{args.input}:{err.line}:{err.col}: {err.message}", file=sys.stderr)
        return EXIT_PARSE

    cap = args.oracle_cap if args.oracle_cap is not None else DEFAULT_CAP[instance.rooted]
    if args.verify and instance.n > cap:
        print(f"supertrees: --verify needs at most {cap} labels, instance has {instance.n}", file=sys.stderr)
        return EXIT_USAGE

    try:
        result, solver = _solve(args.problem, instance)
    except InfeasibleInputError as err:
        print(f"supertrees: infeasible input: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE

    out.write(f"size={result.size}\n{result.newick}\n")
    if args.stats:
        stats = {key: val for key, val in result.stats.items() if key != "top_state"}
        print(json.dumps(stats, sort_keys=True), file=sys.stderr)
    if args.dump_states:
        for i, (state, value) in enumerate(solver.value.items()):
            print(f"{i}\t{value}\t{solver.space.describe(state)}", file=sys.stderr)

    if args.verify:
        brute = brute_masp if args.problem == "masp" else brute_mcsp
        check = is_agreement_supertree if args.problem == "masp" else is_compatible_supertree
        expected, _ = brute(instance, cap=cap)
        problems = []
        if expected != result.size:
            problems.append(f"oracle size {expected} != solver size {result.size}")
        if result.tree.n_leaves != result.size:
            problems.append(f"witness has {result.tree.n_leaves} leaves, reported {result.size}")
        if not check(result.tree, instance):
            problems.append("witness fails the supertree check")
        if problems:
            for msg in problems:
                print(f"supertrees: verification failed: {msg}", file=sys.stderr)
            return EXIT_MISMATCH
        print("verified", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
