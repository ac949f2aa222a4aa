"""Instance/solution files, random instance generation, and the benchmark runner.

All numbers cross the file boundary as exact strings (decimal or "num/den"),
and every writer emits canonical bytes: fixed key order, two-space indent,
fraction strings in lowest terms, trailing newline. Identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from time import perf_counter
from typing import IO, Any, Sequence

from .core import (
    ZERO,
    Instance,
    InstanceError,
    Job,
    Solution,
    format_rational,
    normalize_instance,
    parse_rational,
)
from .johnson import simulate_makespan
from .oracle import BudgetExceededError, exact_opt
from .ptas import GuessStats, solve_ptas

INSTANCE_VERSION = 1
SOLUTION_VERSION = 1
PROFILES = ("uniform", "correlated", "knapsack-degenerate", "tight")
CSV_HEADER = (
    "instance,n,m,epsilon,algorithm,profit,opt,ratio,feasible,ms,"
    "subset_guesses,distribution_guesses,critical_guesses,lp_solves"
)

_INSTANCE_KEYS = {"version", "m", "makespan_bound", "jobs"}
_JOB_KEYS = {"id", "a", "b", "p"}
_SOLUTION_KEYS = {
    "version",
    "instance_digest",
    "algorithm",
    "epsilon",
    "m",
    "total_profit",
    "feasible",
    "flowshops",
}
_FLOWSHOP_KEYS = {"jobs", "makespan"}


def _load_json(source: str | Path | IO[str]) -> Any:
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc}") from exc


def _expect_keys(data: dict, expected: set[str], what: str) -> None:
    if not isinstance(data, dict):
        raise InstanceError(f"{what} must be a JSON object")
    unknown = set(data) - expected
    if unknown:
        raise InstanceError(f"{what} has unknown fields: {sorted(unknown)}")
    missing = expected - set(data)
    if missing:
        raise InstanceError(f"{what} is missing fields: {sorted(missing)}")


def load_instance(source: str | Path | IO[str]) -> tuple[Instance, tuple[int, ...]]:
    """Parse and normalize an instance file; also report ids of dropped jobs."""
    data = _load_json(source)
    _expect_keys(data, _INSTANCE_KEYS, "instance")
    if data["version"] != INSTANCE_VERSION:
        raise InstanceError(f"unsupported instance version {data['version']!r}")
    m = data["m"]
    if not isinstance(m, int) or isinstance(m, bool):
        raise InstanceError(f"m must be an integer, got {m!r}")
    bound = parse_rational(data["makespan_bound"])
    jobs_field = data["jobs"]
    if not isinstance(jobs_field, list):
        raise InstanceError("jobs must be a list")
    jobs = []
    for entry in jobs_field:
        _expect_keys(entry, _JOB_KEYS, "job")
        job_id = entry["id"]
        if not isinstance(job_id, int) or isinstance(job_id, bool):
            raise InstanceError(f"job id must be an integer, got {job_id!r}")
        jobs.append(
            Job(
                id=job_id,
                a=parse_rational(entry["a"]),
                b=parse_rational(entry["b"]),
                p=parse_rational(entry["p"]),
            )
        )
    raw = Instance(m=m, jobs=tuple(jobs), makespan_bound=bound)
    normalized = normalize_instance(raw)
    kept = {job.id for job in normalized.jobs}
    dropped = tuple(job.id for job in raw.jobs if job.id not in kept)
    return normalized, dropped


def parse_instance(source: str | Path | IO[str]) -> Instance:
    return load_instance(source)[0]


def instance_to_json(instance: Instance) -> str:
    doc = {
        "version": INSTANCE_VERSION,
        "m": instance.m,
        "makespan_bound": format_rational(instance.makespan_bound),
        "jobs": [
            {
                "id": job.id,
                "a": format_rational(job.a),
                "b": format_rational(job.b),
                "p": format_rational(job.p),
            }
            for job in sorted(instance.jobs, key=lambda j: j.id)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def write_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(instance_to_json(instance), encoding="utf-8")


def instance_digest(instance: Instance) -> str:
    return hashlib.sha256(instance_to_json(instance).encode("utf-8")).hexdigest()


def solution_to_json(
    instance: Instance,
    solution: Solution,
    algorithm: str,
    epsilon: Fraction | None,
) -> str:
    doc = {
        "version": SOLUTION_VERSION,
        "instance_digest": instance_digest(instance),
        "algorithm": algorithm,
        "epsilon": None if epsilon is None else format_rational(epsilon),
        "m": instance.m,
        "total_profit": format_rational(solution.total_profit),
        "feasible": solution.feasible,
        "flowshops": [
            {"jobs": list(ids), "makespan": format_rational(ms)}
            for ids, ms in zip(solution.per_flowshop, solution.per_flowshop_makespan)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_solution(source: str | Path | IO[str]) -> dict:
    data = _load_json(source)
    _expect_keys(data, _SOLUTION_KEYS, "solution")
    if data["version"] != SOLUTION_VERSION:
        raise InstanceError(f"unsupported solution version {data['version']!r}")
    if not isinstance(data["flowshops"], list):
        raise InstanceError("flowshops must be a list")
    for shop in data["flowshops"]:
        _expect_keys(shop, _FLOWSHOP_KEYS, "flowshop")
    return data


def verify_solution(instance: Instance, solution_doc: dict) -> list[str]:
    """Recompute everything a solution file claims; return violations found.

    Makespans are recomputed from the stored job order with the event-driven
    simulation, a route independent of the closed form used by the solvers.
    """
    violations: list[str] = []
    digest = instance_digest(instance)
    if solution_doc["instance_digest"] != digest:
        violations.append("instance digest mismatch: solution belongs to a different instance")
        return violations
    if solution_doc["m"] != instance.m:
        violations.append(f"flowshop count mismatch: {solution_doc['m']} != {instance.m}")
    shops = solution_doc["flowshops"]
    if len(shops) != instance.m:
        violations.append(f"expected {instance.m} flowshop entries, found {len(shops)}")
        return violations
    by_id = instance.job_by_id()
    seen: set[int] = set()
    profit = ZERO
    all_within = True
    for idx, shop in enumerate(shops):
        jobs = []
        for job_id in shop["jobs"]:
            if job_id not in by_id:
                violations.append(f"flowshop {idx}: unknown job id {job_id}")
                continue
            if job_id in seen:
                violations.append(f"job {job_id} appears on more than one flowshop")
                continue
            seen.add(job_id)
            jobs.append(by_id[job_id])
            profit += by_id[job_id].p
        makespan = simulate_makespan(jobs)
        stated = parse_rational(shop["makespan"])
        if makespan != stated:
            violations.append(
                f"flowshop {idx}: stated makespan {shop['makespan']} != recomputed "
                f"{format_rational(makespan)}"
            )
        if makespan > instance.makespan_bound:
            all_within = False
            violations.append(
                f"flowshop {idx}: makespan {format_rational(makespan)} exceeds the bound"
            )
    stated_profit = parse_rational(solution_doc["total_profit"])
    if stated_profit != profit:
        violations.append(
            f"stated profit {solution_doc['total_profit']} != recomputed {format_rational(profit)}"
        )
    if solution_doc["feasible"] != all_within:
        violations.append("feasible flag does not match recomputed makespans")
    return violations


def generate_instance(n: int, m: int, seed: int, profile: str) -> Instance:
    """Deterministic random instance for the given profile."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    rng = random.Random(seed)
    jobs = []
    for job_id in range(1, n + 1):
        if profile == "knapsack-degenerate":
            a = Fraction(rng.randint(1, 500), 1000)
            b = ZERO
            p = Fraction(rng.randint(1, 100))
        elif profile == "tight":
            total = Fraction(rng.randint(380, 520), 1000)
            a = total * Fraction(rng.randint(0, 1000), 1000)
            b = total - a
            p = Fraction(rng.randint(1, 100))
        else:
            a = Fraction(rng.randint(1, 500), 1000)
            b = Fraction(rng.randint(1, 500), 1000)
            if profile == "uniform":
                p = Fraction(rng.randint(1, 100))
            else:  # correlated
                base = int(100 * (a + b))
                p = Fraction(max(1, base + rng.randint(-5, 5)))
        jobs.append(Job(id=job_id, a=a, b=b, p=p))
    return normalize_instance(Instance(m=m, jobs=tuple(jobs)))


@dataclass(frozen=True)
class BenchmarkRow:
    instance: str
    n: int
    m: int
    epsilon: Fraction
    algorithm: str
    profit: Fraction
    opt: Fraction | None
    feasible: bool
    ms: int
    stats: GuessStats

    def to_csv(self) -> str:
        if self.opt is None:
            opt = ""
            ratio = ""
        else:
            opt = format_rational(self.opt)
            ratio = format_rational(self.profit / self.opt) if self.opt > 0 else ""
        fields = [
            self.instance,
            str(self.n),
            str(self.m),
            format_rational(self.epsilon),
            self.algorithm,
            format_rational(self.profit),
            opt,
            ratio,
            "true" if self.feasible else "false",
            str(self.ms),
            str(self.stats.subset_guesses),
            str(self.stats.distribution_guesses),
            str(self.stats.critical_guesses),
            str(self.stats.lp_solves),
        ]
        return ",".join(fields)


def _bench_task(args: tuple[str, str, bool, int | None]) -> tuple[str, str, BenchmarkRow]:
    path, eps_text, timing, oracle_budget = args
    instance, _ = load_instance(path)
    epsilon = Fraction(eps_text)
    stats = GuessStats()
    start = perf_counter()
    solution = solve_ptas(instance, epsilon, stats=stats)
    elapsed = int((perf_counter() - start) * 1000) if timing else 0
    try:
        if oracle_budget is None:
            opt = exact_opt(instance).total_profit
        else:
            opt = exact_opt(instance, max_assignments=oracle_budget).total_profit
    except BudgetExceededError:
        opt = None
    row = BenchmarkRow(
        instance=Path(path).stem,
        n=len(instance.jobs),
        m=instance.m,
        epsilon=epsilon,
        algorithm="ptas_single" if instance.m == 1 else "ptas_multi",
        profit=solution.total_profit,
        opt=opt,
        feasible=solution.feasible,
        ms=elapsed,
        stats=stats,
    )
    return Path(path).stem, eps_text, row


def run_bench(
    directory: str | Path,
    epsilons: Sequence[Fraction],
    csv_path: str | Path,
    *,
    jobs: int = 1,
    timing: bool = True,
    oracle_budget: int | None = None,
) -> list[BenchmarkRow]:
    """Run the scheme plus oracle on every instance file and emit one CSV row each.

    Rows are sorted by (instance id, epsilon) before writing, so output does
    not depend on completion order at any concurrency level.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise InstanceError(f"not a directory: {directory}")
    paths = sorted(str(p) for p in directory.glob("*.json"))
    tasks = [
        (path, str(Fraction(eps)), timing, oracle_budget)
        for path in paths
        for eps in epsilons
    ]
    if jobs > 1 and tasks:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_bench_task, tasks))
    else:
        results = [_bench_task(task) for task in tasks]
    results.sort(key=lambda item: (item[0], Fraction(item[1])))
    rows = [row for _, _, row in results]
    lines = [CSV_HEADER] + [row.to_csv() for row in rows]
    Path(csv_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return rows
