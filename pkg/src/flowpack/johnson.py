"""Two-machine sequencing: optimal job order, makespan formulas, scheduling helpers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import ZERO, Instance, Job, Solution


@dataclass(frozen=True, slots=True)
class MakespanReport:
    makespan: Fraction
    critical_position: int  # 1-based position attaining the makespan; 0 for an empty sequence


def johnson_order(jobs: Iterable[Job]) -> tuple[Job, ...]:
    """Sort jobs into the minimum-makespan order for one two-stage flowshop.

    Jobs whose first stage is no longer than their second come first, by
    ascending first-stage workload; the rest follow by descending second-stage
    workload. Equal keys are broken by ascending id, so the order is a pure
    function of the job set.
    """
    jobs = list(jobs)
    first = sorted((j for j in jobs if j.a <= j.b), key=lambda j: (j.a, j.id))
    second = sorted((j for j in jobs if j.a > j.b), key=lambda j: (-j.b, j.id))
    return tuple(first + second)


def makespan_closed_form(seq: Sequence[Job]) -> MakespanReport:
    """Makespan of a fixed job sequence via prefix/suffix sums.

    Equals max over positions s of (first-stage load of jobs 1..s plus
    second-stage load of jobs s..n); the smallest maximizing s is reported
    as the critical position.
    """
    n = len(seq)
    if n == 0:
        return MakespanReport(ZERO, 0)
    suffix_b = [ZERO] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_b[i] = suffix_b[i + 1] + seq[i].b
    best = None
    best_pos = 0
    prefix_a = ZERO
    for i, job in enumerate(seq):
        prefix_a += job.a
        value = prefix_a + suffix_b[i]
        if best is None or value > best:
            best = value
            best_pos = i + 1
    return MakespanReport(best, best_pos)


def simulate_makespan(seq: Sequence[Job]) -> Fraction:
    """Event-driven two-machine simulation; independent cross-check of the closed form."""
    c1 = ZERO
    c2 = ZERO
    for job in seq:
        c1 += job.a
        if c1 > c2:
            c2 = c1
        c2 += job.b
    return c2


def min_makespan_schedule(jobs: Iterable[Job]) -> tuple[tuple[Job, ...], MakespanReport]:
    seq = johnson_order(jobs)
    return seq, makespan_closed_form(seq)


def assignment_to_solution(instance: Instance, assignment: Mapping[int, int]) -> Solution:
    """Schedule an assignment job-id -> flowshop index and report exact makespans."""
    by_id = instance.job_by_id()
    shops: list[list[Job]] = [[] for _ in range(instance.m)]
    for job_id, shop in assignment.items():
        shops[shop].append(by_id[job_id])
    sequences = []
    makespans = []
    profit = ZERO
    for shop_jobs in shops:
        seq = johnson_order(shop_jobs)
        sequences.append(tuple(job.id for job in seq))
        makespans.append(makespan_closed_form(seq).makespan)
        profit += sum((job.p for job in shop_jobs), ZERO)
    feasible = all(ms <= instance.makespan_bound for ms in makespans)
    return Solution(
        per_flowshop=tuple(sequences),
        total_profit=profit,
        per_flowshop_makespan=tuple(makespans),
        feasible=feasible,
    )
