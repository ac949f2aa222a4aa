"""Approximation schemes: guess enumeration, program construction, rounding, selection.

Both schemes collect candidate job selections from two sources: every subset
of at most `k` jobs (exhaustive, so small optima are solved exactly), and,
when more jobs exist, one rounded candidate per guess of the `k` most
profitable jobs, their placement, and the per-flowshop critical jobs. The
most profitable candidate whose Johnson schedule meets the makespan bound
wins, so the returned solution is always feasible regardless of what the
relaxation produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Sequence

from .core import ONE, ZERO, Instance, Job, Solution
from .johnson import assignment_to_solution, johnson_order, makespan_closed_form
from .lp import OPTIMAL, BasicSolution, LinearProgram, solve_to_vertex

SMALL_SUBSET = "small-subset"
LP_ROUNDING = "lp-rounding"


@dataclass(frozen=True, slots=True)
class EpsilonParameter:
    """Requested accuracy and the derived guess size.

    `k` is the number of top-profit jobs guessed exhaustively; rounding it up
    can only strengthen the guarantee, and the effective epsilon 1/(k-1) is
    what the output actually achieves.
    """

    requested_epsilon: Fraction
    k: int
    effective_epsilon: Fraction


@dataclass(frozen=True, slots=True)
class Guess:
    """One enumerated substructure: profitable ids, their placement, criticals."""

    profitable: frozenset[int]
    distribution: tuple[tuple[int, int], ...]
    criticals: tuple[int, ...]
    p_min: Fraction
    cheap_pool: frozenset[int]


@dataclass(frozen=True, slots=True)
class Candidate:
    assignment: tuple[tuple[int, int], ...]  # sorted (job id, flowshop index)
    source: str
    profit: Fraction


@dataclass(slots=True)
class GuessStats:
    """Counters and extrema collected across one solver run."""

    subset_guesses: int = 0
    distribution_guesses: int = 0
    critical_guesses: int = 0
    lp_solves: int = 0
    lp_feasible: int = 0
    rounded_candidates: int = 0
    rounded_infeasible: int = 0
    max_lp_objective: Fraction | None = None
    max_fractional_vars: int = 0
    max_fractional_jobs: int = 0

    def record_objective(self, value: Fraction) -> None:
        if self.max_lp_objective is None or value > self.max_lp_objective:
            self.max_lp_objective = value


def compute_k(epsilon: Fraction) -> EpsilonParameter:
    """Turn a requested epsilon in (0,1) into the guessed-subset size."""
    epsilon = Fraction(epsilon)
    if not ZERO < epsilon < ONE:
        raise ValueError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")
    k = math.ceil((1 + epsilon) / epsilon)
    return EpsilonParameter(epsilon, k, Fraction(1, k - 1))


def enumerate_small_candidates(instance: Instance, k: int, m: int) -> list[Candidate]:
    """Every job subset of size <= k, expanded over all flowshop assignments."""
    jobs = sorted(instance.jobs, key=lambda j: j.id)
    out: list[Candidate] = []
    for size in range(min(k, len(jobs)) + 1):
        for subset in combinations(jobs, size):
            for shops in product(range(m), repeat=size):
                assignment = tuple((job.id, shop) for job, shop in zip(subset, shops))
                profit = sum((job.p for job in subset), ZERO)
                out.append(Candidate(assignment, SMALL_SUBSET, profit))
    return out


def cheap_pool(
    jobs: Iterable[Job], profitable_ids: frozenset[int] | set[int]
) -> tuple[Fraction, frozenset[int]]:
    """Profit threshold of a guessed subset and the job pool it admits."""
    jobs = list(jobs)
    if not profitable_ids:
        raise ValueError("profitable set must be nonempty")
    by_id = {job.id: job for job in jobs}
    p_min = min(by_id[i].p for i in profitable_ids)
    pool = {job.id for job in jobs if job.p <= p_min} | set(profitable_ids)
    return p_min, frozenset(pool)


def enumerate_distributions(
    profitable_ids: Iterable[int], m: int, *, canonical: bool = True
) -> list[dict[int, int]]:
    """All placements of the guessed jobs onto m identical flowshops.

    With `canonical` (default) one representative per relabeling orbit is
    produced: scanning jobs by ascending id, flowshop labels appear in
    first-use order. Raw mode enumerates all m**k labeled placements.
    """
    ids = sorted(profitable_ids)
    if not ids:
        return [{}]
    out: list[dict[int, int]] = []
    if not canonical:
        for shops in product(range(m), repeat=len(ids)):
            out.append(dict(zip(ids, shops)))
        return out

    current: list[int] = []

    def extend(i: int, used: int) -> None:
        if i == len(ids):
            out.append(dict(zip(ids, current)))
            return
        for shop in range(min(used + 1, m)):
            current.append(shop)
            extend(i + 1, max(used, shop + 1))
            current.pop()

    extend(0, 0)
    return out


def canonical_distribution(distribution: Mapping[int, int]) -> tuple[int, ...]:
    """Relabel flowshops in first-appearance order over ascending job id."""
    relabel: dict[int, int] = {}
    out = []
    for job_id in sorted(distribution):
        shop = distribution[job_id]
        if shop not in relabel:
            relabel[shop] = len(relabel)
        out.append(relabel[shop])
    return tuple(out)


def build_lp_single(
    pool_sorted: Sequence[Job],
    profitable_ids: frozenset[int] | set[int],
    critical_id: int,
) -> LinearProgram:
    """One-flowshop selection program for a guessed subset and critical job.

    One capacity row evaluates the makespan formula at the critical position;
    guessed jobs are fixed at 1, the rest of the pool ranges over [0, 1], and
    jobs outside the pool are not variables at all.
    """
    position = next(i for i, job in enumerate(pool_sorted) if job.id == critical_id)
    coeffs = []
    bounds = []
    objective = []
    labels = []
    for i, job in enumerate(pool_sorted):
        if i < position:
            c = job.a
        elif i == position:
            c = job.a + job.b
        else:
            c = job.b
        coeffs.append(c)
        forced = job.id in profitable_ids or job.id == critical_id
        bounds.append((ONE, ONE) if forced else (ZERO, ONE))
        objective.append(job.p)
        labels.append((job.id, 0))
    return LinearProgram(
        objective=tuple(objective),
        rows=((tuple(coeffs), "<=", ONE),),
        bounds=tuple(bounds),
        labels=tuple(labels),
    )


def build_lp_multi(
    pool_sorted: Sequence[Job],
    distribution: Mapping[int, int],
    criticals: Sequence[int],
    instance: Instance,
) -> LinearProgram:
    """Multi-flowshop selection program with an overflow flowshop.

    Variables x[i,j] place pool job i on flowshop j; the extra flowshop m
    absorbs unselected jobs, earns no profit, and gets capacity large enough
    (total workload of all jobs) never to bind. Free pool jobs must be placed
    somewhere, so each carries an equality row over all m+1 flowshops.
    """
    m = instance.m
    n_pool = len(pool_sorted)
    width = m + 1
    position = {job.id: i for i, job in enumerate(pool_sorted)}
    forced_shop: dict[int, int] = dict(distribution)
    for shop, crit_id in enumerate(criticals):
        existing = forced_shop.get(crit_id)
        if existing is not None and existing != shop:
            raise ValueError(f"critical job {crit_id} conflicts with its guessed flowshop")
        forced_shop[crit_id] = shop

    critical_pos = [position[crit_id] for crit_id in criticals]
    dummy_pos = n_pool - 1

    def var(i: int, j: int) -> int:
        return i * width + j

    nvars = n_pool * width
    objective = [ZERO] * nvars
    bounds: list[tuple[Fraction, Fraction]] = [(ZERO, ONE)] * nvars
    labels: list[tuple[int, int | None]] = [(0, None)] * nvars
    for i, job in enumerate(pool_sorted):
        for j in range(width):
            labels[var(i, j)] = (job.id, j if j < m else None)
            if j < m:
                objective[var(i, j)] = job.p
        shop = forced_shop.get(job.id)
        if shop is not None:
            for j in range(m):
                bounds[var(i, j)] = (ONE, ONE) if j == shop else (ZERO, ZERO)

    rows: list[tuple[tuple[Fraction, ...], str, Fraction]] = []
    for j in range(m):
        s = critical_pos[j]
        coeffs = [ZERO] * nvars
        for i, job in enumerate(pool_sorted):
            if i < s:
                coeffs[var(i, j)] = job.a
            elif i == s:
                coeffs[var(i, j)] = job.a + job.b
            else:
                coeffs[var(i, j)] = job.b
        rows.append((tuple(coeffs), "<=", ONE))

    overflow_cap = sum((job.a + job.b for job in instance.jobs), ZERO)
    coeffs = [ZERO] * nvars
    for i, job in enumerate(pool_sorted):
        coeffs[var(i, m)] = job.a + job.b if i == dummy_pos else job.a
    rows.append((tuple(coeffs), "<=", overflow_cap))

    for i, job in enumerate(pool_sorted):
        if job.id in forced_shop:
            continue
        coeffs = [ZERO] * nvars
        for j in range(width):
            coeffs[var(i, j)] = ONE
        rows.append((tuple(coeffs), "=", ONE))

    return LinearProgram(
        objective=tuple(objective),
        rows=tuple(rows),
        bounds=tuple(bounds),
        labels=tuple(labels),
    )


def round_solution(basic: BasicSolution, lp: LinearProgram) -> Candidate:
    """Keep exactly the variables equal to 1 on real flowshops; drop fractions."""
    if basic.status != OPTIMAL:
        raise ValueError("can only round an optimal solution")
    assignment = []
    profit = ZERO
    for value, label, coeff in zip(basic.values, lp.labels, lp.objective):
        job_id, shop = label
        if shop is None:
            continue
        if value == 1:
            assignment.append((job_id, shop))
            profit += coeff
    return Candidate(tuple(sorted(assignment)), LP_ROUNDING, profit)


def _fractional_var_count(basic: BasicSolution) -> int:
    return sum(1 for v in basic.values if 0 < v < 1)


def _fractional_job_count(basic: BasicSolution, lp: LinearProgram) -> int:
    """Jobs whose placement variables are positive but never equal to 1."""
    integral: set[int] = set()
    positive: set[int] = set()
    for value, label in zip(basic.values, lp.labels):
        job_id, _ = label
        if value > 0:
            positive.add(job_id)
        if value == 1:
            integral.add(job_id)
    return len(positive - integral)


def _consistent_criticals(criticals: Sequence[Job], distribution: Mapping[int, int]) -> bool:
    ids = [job.id for job in criticals]
    if len(set(ids)) != len(ids):
        return False
    for shop, job in enumerate(criticals):
        placed = distribution.get(job.id)
        if placed is not None and placed != shop:
            return False
    return True


def _enumerate_guesses(
    jobs: Sequence[Job],
    k: int,
    m: int,
    canonical: bool,
    stats: GuessStats,
) -> Iterator[tuple[Guess, tuple[Job, ...]]]:
    """Yield every consistent (profitable subset, distribution, criticals) guess."""
    for subset in combinations(jobs, k):
        stats.subset_guesses += 1
        profitable = frozenset(job.id for job in subset)
        p_min, pool_ids = cheap_pool(jobs, profitable)
        pool_sorted = johnson_order(j for j in jobs if j.id in pool_ids)
        for distribution in enumerate_distributions(profitable, m, canonical=canonical):
            stats.distribution_guesses += 1
            for criticals in product(pool_sorted, repeat=m):
                stats.critical_guesses += 1
                if not _consistent_criticals(criticals, distribution):
                    continue
                guess = Guess(
                    profitable=profitable,
                    distribution=tuple(sorted(distribution.items())),
                    criticals=tuple(job.id for job in criticals),
                    p_min=p_min,
                    cheap_pool=pool_ids,
                )
                yield guess, pool_sorted


def _select_best(
    instance: Instance, candidates: Iterable[Candidate], stats: GuessStats
) -> Solution:
    """Most profitable candidate whose Johnson schedule meets the bound.

    Ties go to the lexicographically smallest assignment, so the result does
    not depend on enumeration or evaluation order.
    """
    by_id = instance.job_by_id()
    bound = instance.makespan_bound
    best: Candidate | None = None
    for cand in candidates:
        shops: dict[int, list[Job]] = {}
        for job_id, shop in cand.assignment:
            shops.setdefault(shop, []).append(by_id[job_id])
        feasible = all(
            makespan_closed_form(johnson_order(jobs)).makespan <= bound
            for jobs in shops.values()
        )
        if not feasible:
            if cand.source == LP_ROUNDING:
                stats.rounded_infeasible += 1
            continue
        if (
            best is None
            or cand.profit > best.profit
            or (cand.profit == best.profit and cand.assignment < best.assignment)
        ):
            best = cand
    assert best is not None, "the empty candidate is always feasible"
    return assignment_to_solution(instance, dict(best.assignment))


def _merge(candidates: dict[tuple, Candidate], cand: Candidate) -> None:
    candidates.setdefault(cand.assignment, cand)


def ptas_single(
    instance: Instance, epsilon: Fraction, *, stats: GuessStats | None = None
) -> Solution:
    """Near-optimal selection for a single flowshop.

    The returned profit is at least (1 - effective epsilon) times the optimum,
    and exactly optimal whenever the optimum uses at most `k` jobs.
    """
    if instance.m != 1:
        raise ValueError(f"single-flowshop solver called with m={instance.m}")
    stats = stats if stats is not None else GuessStats()
    params = compute_k(epsilon)
    jobs = sorted(instance.jobs, key=lambda j: j.id)
    candidates: dict[tuple, Candidate] = {}
    for cand in enumerate_small_candidates(instance, params.k, 1):
        _merge(candidates, cand)

    if len(jobs) > params.k:
        for guess, pool_sorted in _enumerate_guesses(jobs, params.k, 1, True, stats):
            program = build_lp_single(pool_sorted, guess.profitable, guess.criticals[0])
            stats.lp_solves += 1
            basic = solve_to_vertex(program)
            if basic.status != OPTIMAL:
                continue
            stats.lp_feasible += 1
            stats.record_objective(basic.objective_value)
            frac = _fractional_var_count(basic)
            if frac > stats.max_fractional_vars:
                stats.max_fractional_vars = frac
            stats.rounded_candidates += 1
            _merge(candidates, round_solution(basic, program))

    return _select_best(instance, candidates.values(), stats)


def ptas_multi(
    instance: Instance,
    epsilon: Fraction,
    *,
    scale_epsilon: bool = True,
    canonical_distributions: bool = True,
    stats: GuessStats | None = None,
) -> Solution:
    """Near-optimal selection for m flowshops.

    In scaled mode (default) the requested epsilon is divided by m+1 before
    sizing the guess, so the output profit is at least (1 - epsilon) times
    the optimum. Raw mode keeps the requested epsilon and guarantees
    (1 - effective epsilon * (m+1)) times the optimum instead.
    """
    stats = stats if stats is not None else GuessStats()
    epsilon = Fraction(epsilon)
    internal = epsilon / (instance.m + 1) if scale_epsilon else epsilon
    params = compute_k(internal)
    m = instance.m
    jobs = sorted(instance.jobs, key=lambda j: j.id)
    candidates: dict[tuple, Candidate] = {}
    for cand in enumerate_small_candidates(instance, params.k, m):
        _merge(candidates, cand)

    if len(jobs) > params.k:
        for guess, pool_sorted in _enumerate_guesses(
            jobs, params.k, m, canonical_distributions, stats
        ):
            program = build_lp_multi(
                pool_sorted, dict(guess.distribution), guess.criticals, instance
            )
            stats.lp_solves += 1
            basic = solve_to_vertex(program)
            if basic.status != OPTIMAL:
                continue
            stats.lp_feasible += 1
            stats.record_objective(basic.objective_value)
            frac_jobs = _fractional_job_count(basic, program)
            if frac_jobs > stats.max_fractional_jobs:
                stats.max_fractional_jobs = frac_jobs
            stats.rounded_candidates += 1
            _merge(candidates, round_solution(basic, program))

    return _select_best(instance, candidates.values(), stats)


def solve_ptas(
    instance: Instance,
    epsilon: Fraction,
    *,
    raw_epsilon: bool = False,
    stats: GuessStats | None = None,
) -> Solution:
    """Dispatch to the single- or multi-flowshop scheme."""
    if instance.m == 1:
        return ptas_single(instance, epsilon, stats=stats)
    return ptas_multi(instance, epsilon, scale_epsilon=not raw_epsilon, stats=stats)
