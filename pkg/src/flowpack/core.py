"""Domain types shared by every solver stage.

All quantities are exact rationals (`fractions.Fraction`): selection and
rounding decisions depend on distinguishing a variable equal to 1 from one
slightly below it, so no floating point is used anywhere in solver logic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

ONE = Fraction(1)
ZERO = Fraction(0)


class InstanceError(ValueError):
    """Structurally invalid instance data (bad bound, negative field, duplicate id)."""


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse a decimal string ("0.3"), fraction string ("3/10") or integer exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise InstanceError(f"refusing float literal {text!r}; pass a string or integer")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"not a rational number: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Canonical string form: "num/den" in lowest terms, or "num" for integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, slots=True)
class Job:
    """A two-stage job: first-stage workload `a`, second-stage workload `b`, profit `p`."""

    id: int
    a: Fraction
    b: Fraction
    p: Fraction

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0:
            raise InstanceError(f"job {self.id}: negative workload")
        if self.p < 0:
            raise InstanceError(f"job {self.id}: negative profit")


@dataclass(frozen=True, slots=True)
class Instance:
    """`m` identical two-stage flowshops plus the jobs competing for them.

    `makespan_bound` is arbitrary positive before `normalize_instance` and
    exactly 1 afterwards.
    """

    m: int
    jobs: tuple[Job, ...]
    makespan_bound: Fraction = ONE

    def __post_init__(self) -> None:
        if self.m < 1:
            raise InstanceError(f"flowshop count must be positive, got {self.m}")
        if self.makespan_bound <= 0:
            raise InstanceError(f"makespan bound must be positive, got {self.makespan_bound}")
        seen: set[int] = set()
        for job in self.jobs:
            if job.id in seen:
                raise InstanceError(f"duplicate job id {job.id}")
            seen.add(job.id)

    def job_by_id(self) -> dict[int, Job]:
        return {job.id: job for job in self.jobs}


@dataclass(frozen=True, slots=True)
class Solution:
    """Per-flowshop ordered job-id sequences with their exact makespans."""

    per_flowshop: tuple[tuple[int, ...], ...]
    total_profit: Fraction
    per_flowshop_makespan: tuple[Fraction, ...]
    feasible: bool

    def assigned_ids(self) -> tuple[int, ...]:
        return tuple(job_id for shop in self.per_flowshop for job_id in shop)


def normalize_instance(instance: Instance) -> Instance:
    """Rescale workloads so the makespan bound becomes 1.

    Jobs whose scaled total workload exceeds 1 can never be scheduled, even
    alone, and are dropped. Profits and job ids are preserved.
    """
    bound = instance.makespan_bound
    if bound <= 0:
        raise InstanceError(f"makespan bound must be positive, got {bound}")
    scaled = (Job(j.id, j.a / bound, j.b / bound, j.p) for j in instance.jobs)
    kept = tuple(j for j in scaled if j.a + j.b <= 1)
    return Instance(m=instance.m, jobs=kept, makespan_bound=ONE)
