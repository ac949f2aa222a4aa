"""Command-line interface: solve, verify, gen, bench.

Exit codes: 0 success, 1 infeasibility or verification failure, 2 input
error, 3 exact-search budget refusal.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .core import Instance, InstanceError
from .harness import (
    generate_instance,
    instance_to_json,
    load_instance,
    load_solution,
    run_bench,
    solution_to_json,
    verify_solution,
    write_instance,
)
from .oracle import BudgetExceededError, exact_opt
from .ptas import GuessStats, solve_ptas

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _parse_epsilon(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"not a rational epsilon: {text!r}") from exc
    if not 0 < value < 1:
        raise InstanceError(f"epsilon must lie strictly between 0 and 1, got {text}")
    return value


def _load_with_warnings(path: str) -> Instance:
    instance, dropped = load_instance(path)
    for job_id in dropped:
        print(f"warning: dropped job {job_id}: total workload exceeds the makespan bound",
              file=sys.stderr)
    return instance


def _cmd_solve(args: argparse.Namespace) -> int:
    instance = _load_with_warnings(args.instance)
    if args.algorithm == "exact":
        solution = exact_opt(instance, max_assignments=args.oracle_budget)
        epsilon = None
        algorithm = "exact"
    else:
        if args.epsilon is None:
            raise InstanceError("--epsilon is required unless --algorithm exact")
        epsilon = _parse_epsilon(args.epsilon)
        stats = GuessStats()
        solution = solve_ptas(instance, epsilon, raw_epsilon=args.raw_epsilon, stats=stats)
        algorithm = "ptas_single" if instance.m == 1 else "ptas_multi"
    assert solution.feasible, "the empty schedule is always feasible"
    payload = solution_to_json(instance, solution, algorithm, epsilon)
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
        print(f"profit {solution.total_profit} -> {args.out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    instance = _load_with_warnings(args.instance)
    doc = load_solution(args.solution)
    violations = verify_solution(instance, doc)
    if violations:
        for line in violations:
            print(f"violation: {line}", file=sys.stderr)
        return EXIT_VIOLATION
    print("ok")
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace) -> int:
    try:
        instance = generate_instance(args.n, args.m, args.seed, args.profile)
    except ValueError as exc:
        raise InstanceError(str(exc)) from exc
    if args.out:
        write_instance(instance, args.out)
        print(f"{len(instance.jobs)} jobs -> {args.out}")
    else:
        sys.stdout.write(instance_to_json(instance))
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    epsilons = [_parse_epsilon(part) for part in args.epsilons.split(",") if part]
    if not epsilons:
        raise InstanceError("at least one epsilon is required")
    rows = run_bench(
        args.dir,
        epsilons,
        args.csv,
        jobs=args.jobs,
        timing=not args.no_timing,
        oracle_budget=args.oracle_budget,
    )
    print(f"{len(rows)} rows -> {args.csv}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowpack",
        description="Profit-maximizing selection and scheduling of two-stage jobs "
        "on parallel two-stage flowshops under a makespan bound.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance file")
    p_solve.add_argument("--instance", required=True)
    p_solve.add_argument("--epsilon", default=None)
    p_solve.add_argument("--algorithm", choices=("ptas", "exact"), default="ptas")
    p_solve.add_argument("--raw-epsilon", action="store_true",
                         help="skip the internal epsilon/(m+1) scaling for m >= 2")
    p_solve.add_argument("--out", default=None)
    p_solve.add_argument("--oracle-budget", type=int, default=None)
    p_solve.set_defaults(func=_cmd_solve)

    p_verify = sub.add_parser("verify", help="check a solution file against its instance")
    p_verify.add_argument("--instance", required=True)
    p_verify.add_argument("--solution", required=True)
    p_verify.set_defaults(func=_cmd_verify)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--profile", required=True)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=_cmd_gen)

    p_bench = sub.add_parser("bench", help="run scheme plus oracle over a directory")
    p_bench.add_argument("--dir", required=True)
    p_bench.add_argument("--epsilons", required=True,
                         help="comma-separated rationals, e.g. 1/2,1/3")
    p_bench.add_argument("--csv", required=True)
    p_bench.add_argument("--jobs", type=int, default=1)
    p_bench.add_argument("--no-timing", action="store_true",
                         help="write 0 in the ms column for byte-stable output")
    p_bench.add_argument("--oracle-budget", type=int, default=None)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def run_cli(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
