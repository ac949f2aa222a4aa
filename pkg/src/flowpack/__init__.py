"""Exact-arithmetic solvers for profit-maximizing packing of two-stage jobs
on parallel two-stage flowshops under a unit makespan bound."""

from .core import (
    Instance,
    InstanceError,
    Job,
    Rational,
    Solution,
    format_rational,
    normalize_instance,
    parse_rational,
)
from .johnson import (
    MakespanReport,
    assignment_to_solution,
    johnson_order,
    makespan_closed_form,
    min_makespan_schedule,
    simulate_makespan,
)
from .lp import (
    BasicSolution,
    LinearProgram,
    UnboundedProgramError,
    fractional_knapsack_oracle,
    solve_to_vertex,
)
from .oracle import (
    BudgetExceededError,
    brute_force_min_makespan,
    exact_opt,
    knapsack_dp_opt,
)
from .ptas import (
    Candidate,
    EpsilonParameter,
    Guess,
    GuessStats,
    build_lp_multi,
    build_lp_single,
    cheap_pool,
    compute_k,
    enumerate_distributions,
    enumerate_small_candidates,
    ptas_multi,
    ptas_single,
    round_solution,
    solve_ptas,
)

__all__ = [
    "BasicSolution",
    "BudgetExceededError",
    "Candidate",
    "EpsilonParameter",
    "Guess",
    "GuessStats",
    "Instance",
    "InstanceError",
    "Job",
    "LinearProgram",
    "MakespanReport",
    "Rational",
    "Solution",
    "UnboundedProgramError",
    "assignment_to_solution",
    "brute_force_min_makespan",
    "build_lp_multi",
    "build_lp_single",
    "cheap_pool",
    "compute_k",
    "enumerate_distributions",
    "enumerate_small_candidates",
    "exact_opt",
    "format_rational",
    "fractional_knapsack_oracle",
    "johnson_order",
    "knapsack_dp_opt",
    "makespan_closed_form",
    "min_makespan_schedule",
    "normalize_instance",
    "parse_rational",
    "ptas_multi",
    "ptas_single",
    "round_solution",
    "simulate_makespan",
    "solve_ptas",
    "solve_to_vertex",
]

__version__ = "0.1.0"
