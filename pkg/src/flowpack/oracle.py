"""Exponential-time exact solvers used as ground truth at desk scale.

Every search has a hard budget with explicit refusal: a truncated search
must never pass silently for an exact optimum.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .core import ZERO, Instance, Job, Solution
from .johnson import (
    assignment_to_solution,
    johnson_order,
    makespan_closed_form,
    simulate_makespan,
)

DEFAULT_SINGLE_SHOP_ASSIGNMENTS = 2**14
DEFAULT_MULTI_SHOP_ASSIGNMENTS = 3**12
DEFAULT_PERMUTATION_JOBS = 8
DEFAULT_PROFIT_CELLS = 1_000_000


class BudgetExceededError(RuntimeError):
    """The requested exact search is larger than the configured budget."""


def exact_opt(
    instance: Instance,
    *,
    max_assignments: int | None = None,
    prune: bool = True,
) -> Solution:
    """Maximum-profit feasible solution by enumerating every job-to-flowshop map.

    Each job goes to one of {unselected, flowshop 0, ..., flowshop m-1}; each
    flowshop is scheduled in Johnson order and checked against the bound.
    Ties are broken toward the lexicographically smallest assignment vector
    (jobs in ascending id, unselected < flowshop 0 < ...). Branch-and-bound
    pruning by remaining profit is exact and can be disabled for testing.
    """
    m = instance.m
    jobs = sorted(instance.jobs, key=lambda j: j.id)
    n = len(jobs)
    if max_assignments is None:
        max_assignments = (
            DEFAULT_SINGLE_SHOP_ASSIGNMENTS if m == 1 else DEFAULT_MULTI_SHOP_ASSIGNMENTS
        )
    if (m + 1) ** n > max_assignments:
        raise BudgetExceededError(
            f"{(m + 1) ** n} assignments exceed budget {max_assignments}"
        )

    bound = instance.makespan_bound
    remaining = [ZERO] * (n + 1)
    for i in range(n - 1, -1, -1):
        remaining[i] = remaining[i + 1] + jobs[i].p

    best_profit = Fraction(-1)
    best: dict[int, int] = {}
    shops: list[list[Job]] = [[] for _ in range(m)]
    chosen: dict[int, int] = {}

    def descend(i: int, profit: Fraction) -> None:
        nonlocal best_profit, best
        if prune and profit + remaining[i] <= best_profit:
            return
        if i == n:
            if profit > best_profit:
                best_profit = profit
                best = dict(chosen)
            return
        job = jobs[i]
        descend(i + 1, profit)
        for shop in range(m):
            shop_jobs = shops[shop]
            shop_jobs.append(job)
            if makespan_closed_form(johnson_order(shop_jobs)).makespan <= bound:
                chosen[job.id] = shop
                descend(i + 1, profit + job.p)
                del chosen[job.id]
            shop_jobs.pop()

    descend(0, ZERO)
    return assignment_to_solution(instance, best)


def brute_force_min_makespan(jobs: Sequence[Job], *, max_jobs: int = DEFAULT_PERMUTATION_JOBS) -> Fraction:
    """Minimum makespan over all permutations; n! search, budgeted."""
    if len(jobs) > max_jobs:
        raise BudgetExceededError(f"{len(jobs)} jobs exceed permutation budget {max_jobs}")
    if not jobs:
        return ZERO
    return min(simulate_makespan(perm) for perm in permutations(jobs))


def knapsack_dp_opt(
    profits: Sequence[Fraction | int],
    weights: Sequence[Fraction],
    capacity: Fraction,
    *,
    max_profit_cells: int = DEFAULT_PROFIT_CELLS,
) -> Fraction:
    """Exact 0/1 knapsack optimum by profit-indexed dynamic programming.

    Profits must be integral (scale rationals to a common denominator first);
    weights and capacity are exact rationals.
    """
    if len(profits) != len(weights):
        raise ValueError("profits/weights length mismatch")
    ints: list[int] = []
    for p in profits:
        frac = Fraction(p)
        if frac.denominator != 1 or frac < 0:
            raise ValueError(f"profit {p} is not a nonnegative integer")
        ints.append(frac.numerator)
    total = sum(ints)
    if total + 1 > max_profit_cells:
        raise BudgetExceededError(f"profit range {total} exceeds budget {max_profit_cells}")

    # min_weight[q] = least total weight achieving profit exactly q
    min_weight: list[Fraction | None] = [None] * (total + 1)
    min_weight[0] = ZERO
    for p, w in zip(ints, weights):
        for q in range(total, p - 1, -1):
            prev = min_weight[q - p]
            if prev is None:
                continue
            candidate = prev + w
            if candidate <= capacity and (min_weight[q] is None or candidate < min_weight[q]):
                min_weight[q] = candidate
    for q in range(total, -1, -1):
        if min_weight[q] is not None:
            return Fraction(q)
    return ZERO
