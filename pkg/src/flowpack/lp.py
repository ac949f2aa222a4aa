"""General-form linear programs and an exact-rational vertex solver.

The solver is a bounded-variable primal simplex over `fractions.Fraction`,
run as a two-phase method with Bland's smallest-index rule for both the
entering and the leaving choice. Exact arithmetic plus Bland's rule give
termination without cycling and bit-for-bit deterministic output, and every
returned solution is an optimal basic feasible point: the number of
variables strictly between their bounds never exceeds the number of rows.

Variables sitting at a bound are kept nonbasic instead of being split into
extra rows, so the row count of a program equals its count of non-trivial
constraints and the basis-size counting arguments used by the rounding
steps apply directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .core import ONE, ZERO

LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="
_RELATIONS = (LESS_EQUAL, EQUAL, GREATER_EQUAL)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"

_AT_LOWER = -1
_AT_UPPER = -2


class UnboundedProgramError(RuntimeError):
    """The objective is unbounded over the feasible region.

    Cannot occur when every variable has finite bounds, but the solver is
    written for general programs and reports the condition distinctly.
    """


@dataclass(frozen=True)
class LinearProgram:
    """max objective . x subject to rows and per-variable finite bounds.

    Each row is (coefficients, relation, right-hand side) with relation one
    of "<=", "=", ">=". Fixing a variable is expressed as lower == upper.
    `labels` carries opaque per-variable tags for reverse mapping.
    """

    objective: tuple[Fraction, ...]
    rows: tuple[tuple[tuple[Fraction, ...], str, Fraction], ...]
    bounds: tuple[tuple[Fraction, Fraction], ...]
    labels: tuple[Any, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.objective)
        if len(self.bounds) != n:
            raise ValueError("bounds/objective length mismatch")
        if self.labels and len(self.labels) != n:
            raise ValueError("labels/objective length mismatch")
        for lower, upper in self.bounds:
            if lower > upper:
                raise ValueError(f"empty bound interval [{lower}, {upper}]")
        for coeffs, relation, _ in self.rows:
            if len(coeffs) != n:
                raise ValueError("row/objective length mismatch")
            if relation not in _RELATIONS:
                raise ValueError(f"unknown relation {relation!r}")


@dataclass(frozen=True)
class BasicSolution:
    status: str
    values: tuple[Fraction, ...] | None
    objective_value: Fraction | None


def _reduced_costs(costs: list[Fraction], tableau: list[list[Fraction]], basis: list[int]) -> list[Fraction]:
    d = list(costs)
    for r, col in enumerate(basis):
        f = d[col]
        if f:
            row = tableau[r]
            for k, v in enumerate(row):
                if v:
                    d[k] -= f * v
    return d


def _basic_values(
    tableau: list[list[Fraction]],
    rhs: list[Fraction],
    state: list[int],
    upper: list[Fraction | None],
) -> list[Fraction]:
    values = list(rhs)
    for j, st in enumerate(state):
        if st == _AT_UPPER:
            u = upper[j]
            if u:
                for r, row in enumerate(tableau):
                    v = row[j]
                    if v:
                        values[r] -= v * u
    return values


def _optimize(
    tableau: list[list[Fraction]],
    rhs: list[Fraction],
    basis: list[int],
    state: list[int],
    upper: list[Fraction | None],
    d: list[Fraction],
) -> None:
    """Run bounded-variable simplex iterations in place until optimal."""
    nrows = len(tableau)
    ncols = len(d)
    while True:
        values = _basic_values(tableau, rhs, state, upper)

        enter = -1
        sigma = 0
        for j in range(ncols):
            st = state[j]
            if st >= 0:
                continue
            span = upper[j]
            if span is not None and span == 0:
                continue
            dj = d[j]
            if st == _AT_LOWER and dj > 0:
                enter, sigma = j, 1
                break
            if st == _AT_UPPER and dj < 0:
                enter, sigma = j, -1
                break
        if enter < 0:
            return

        # Ratio test: the entering variable moves by t >= 0 toward its other
        # bound; each basic variable must stay inside its own bounds. Ties are
        # broken by the smallest blocking variable index (the entering
        # variable's own bound flip counts with index `enter`).
        best_t = upper[enter]
        best_idx = enter
        leave_row = -1
        leave_to_upper = False
        for r in range(nrows):
            w = tableau[r][enter]
            if not w:
                continue
            if sigma < 0:
                w = -w
            if w > 0:
                t = values[r] / w
                to_upper = False
            else:
                cap = upper[basis[r]]
                if cap is None:
                    continue
                t = (cap - values[r]) / (-w)
                to_upper = True
            if best_t is None or t < best_t or (t == best_t and basis[r] < best_idx):
                best_t = t
                best_idx = basis[r]
                leave_row = r
                leave_to_upper = to_upper
        if best_t is None:
            raise UnboundedProgramError("improving direction with no blocking bound")

        if leave_row < 0:
            state[enter] = _AT_UPPER if state[enter] == _AT_LOWER else _AT_LOWER
            continue

        pivot_row = tableau[leave_row]
        pivot = pivot_row[enter]
        if pivot != 1:
            inv = ONE / pivot
            pivot_row = [v * inv if v else v for v in pivot_row]
            tableau[leave_row] = pivot_row
            rhs[leave_row] *= inv
        for r in range(nrows):
            if r == leave_row:
                continue
            f = tableau[r][enter]
            if f:
                row = tableau[r]
                for k, v in enumerate(pivot_row):
                    if v:
                        row[k] -= f * v
                rhs[r] -= f * rhs[leave_row]
        f = d[enter]
        if f:
            for k, v in enumerate(pivot_row):
                if v:
                    d[k] -= f * v

        leaving = basis[leave_row]
        state[leaving] = _AT_UPPER if leave_to_upper else _AT_LOWER
        basis[leave_row] = enter
        state[enter] = leave_row


def solve_to_vertex(lp: LinearProgram) -> BasicSolution:
    """Solve to an optimal basic feasible solution, or report infeasibility.

    Fixed variables (lower == upper) are substituted out before the simplex
    runs; remaining variables are shifted to lower bound zero. Phase 1
    introduces an artificial variable only for rows whose slack cannot serve
    as the initial basic variable.
    """
    nvars = len(lp.objective)
    lowers = [b[0] for b in lp.bounds]
    uppers = [b[1] for b in lp.bounds]
    free = [j for j in range(nvars) if lowers[j] != uppers[j]]
    nfree = len(free)

    # Shifted rows over free variables only: all "<=" after sign handling.
    work_rows: list[tuple[list[Fraction], str, Fraction]] = []
    for coeffs, relation, rhs_value in lp.rows:
        beta = rhs_value
        for j in range(nvars):
            c = coeffs[j]
            if c:
                beta -= c * lowers[j]
        vec = [coeffs[j] for j in free]
        if relation == GREATER_EQUAL:
            vec = [-c for c in vec]
            beta = -beta
            relation = LESS_EQUAL
        work_rows.append((vec, relation, beta))

    nrows = len(work_rows)
    spans: list[Fraction | None] = [uppers[j] - lowers[j] for j in free]

    slack_col: dict[int, int] = {}
    ncols = nfree
    for r, (_, relation, _) in enumerate(work_rows):
        if relation == LESS_EQUAL:
            slack_col[r] = ncols
            ncols += 1
    art_col: dict[int, int] = {}
    negated: list[bool] = []
    for r, (_, relation, beta) in enumerate(work_rows):
        flip = beta < 0
        negated.append(flip)
        if not (relation == LESS_EQUAL and not flip):
            art_col[r] = ncols
            ncols += 1

    upper: list[Fraction | None] = spans + [None] * (ncols - nfree)
    tableau: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []
    for r, (vec, relation, beta) in enumerate(work_rows):
        row = [ZERO] * ncols
        sign = -1 if negated[r] else 1
        for k, c in enumerate(vec):
            if c:
                row[k] = sign * c
        if r in slack_col:
            row[slack_col[r]] = Fraction(sign)
        if r in art_col:
            row[art_col[r]] = ONE
            basis.append(art_col[r])
        else:
            basis.append(slack_col[r])
        tableau.append(row)
        rhs.append(sign * beta)

    state = [_AT_LOWER] * ncols
    for r, col in enumerate(basis):
        state[col] = r

    if art_col:
        costs = [ZERO] * ncols
        for col in art_col.values():
            costs[col] = Fraction(-1)
        d = _reduced_costs(costs, tableau, basis)
        _optimize(tableau, rhs, basis, state, upper, d)
        values = _basic_values(tableau, rhs, state, upper)
        for col in art_col.values():
            st = state[col]
            if st >= 0 and values[st] != 0:
                return BasicSolution(INFEASIBLE, None, None)
            upper[col] = ZERO

    costs = [ZERO] * ncols
    for k, j in enumerate(free):
        costs[k] = lp.objective[j]
    d = _reduced_costs(costs, tableau, basis)
    _optimize(tableau, rhs, basis, state, upper, d)

    final = _basic_values(tableau, rhs, state, upper)
    values_out = list(lowers)
    for k, j in enumerate(free):
        st = state[k]
        if st >= 0:
            shifted = final[st]
        elif st == _AT_UPPER:
            shifted = spans[k]
        else:
            shifted = ZERO
        values_out[j] = lowers[j] + shifted
    objective_value = sum(
        (c * v for c, v in zip(lp.objective, values_out) if c), ZERO
    )
    return BasicSolution(OPTIMAL, tuple(values_out), objective_value)


def fractional_knapsack_oracle(
    profits: Sequence[Fraction], weights: Sequence[Fraction], capacity: Fraction
) -> Fraction:
    """Greedy density optimum of max p.x s.t. w.x <= capacity, x in [0,1]^n.

    Zero-weight items are taken first; the rest by descending profit/weight,
    ties by index. Reference optimum for single-row programs.
    """
    if len(profits) != len(weights):
        raise ValueError("profits/weights length mismatch")
    order = sorted(
        range(len(profits)),
        key=lambda i: (0, ZERO, i) if weights[i] == 0 else (1, -(profits[i] / weights[i]), i),
    )
    total = ZERO
    remaining = capacity
    for i in order:
        w = weights[i]
        if w == 0:
            total += profits[i]
            continue
        if remaining <= 0:
            break
        take = min(ONE, remaining / w)
        total += profits[i] * take
        remaining -= w * take
    return total
