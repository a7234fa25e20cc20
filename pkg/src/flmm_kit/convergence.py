"""Convergence studies: grid-refinement sweeps and observed orders.

The observed order between consecutive refinements is

    order = log(E_next/E_prev) / log(h_next/h_prev)

computed once from the stored errors, so emitted tables can always be
re-derived from their own rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .methods import get_method
from .problems import builtin_problem
from .solver import Grid, LinearRhs, NewtonConfig, SolverError, solve_linear, solve_nonlinear

__all__ = ["EocRow", "EocTable", "eoc_orders", "run_convergence"]

# Errors at or below this level are rounding noise; the order column is
# meaningless there and left unset.
ERROR_FLOOR = 1e-14


@dataclass(frozen=True)
class EocRow:
    m: int
    h: float
    max_error: float
    order: float | None


@dataclass(frozen=True)
class EocTable:
    """One refinement sweep for a (method, beta, problem) combination."""

    method: str
    beta: float
    problem: str
    rows: list[EocRow] = field(default_factory=list)
    failure: str | None = None


def eoc_orders(errors, hs) -> list[float | None]:
    """Observed orders from adjacent (error, h) pairs; first entry is None."""
    out: list[float | None] = [None]
    for i in range(1, len(errors)):
        if errors[i] <= ERROR_FLOOR or errors[i - 1] <= ERROR_FLOOR:
            out.append(None)
        else:
            out.append(math.log(errors[i] / errors[i - 1]) / math.log(hs[i] / hs[i - 1]))
    return out


def run_convergence(
    methods,
    betas,
    m_list,
    problem: str = "paper-nonlinear",
    t0: float = 0.0,
    t_end: float = 1.0,
    newton: NewtonConfig = NewtonConfig(),
    **problem_params,
) -> list[EocTable]:
    """Refinement sweep over every (method, beta) pair and all grid sizes.

    A solver failure aborts only its own (method, beta) column; the table
    for that column carries the diagnostic and the other columns are still
    produced. Results are ordered by (method, beta, m).
    """
    m_list = sorted(int(m) for m in m_list)
    if not m_list:
        raise ValueError("need at least one grid size")
    tables = []
    for method in (get_method(m) for m in methods):
        for beta in betas:
            prob, exact = builtin_problem(problem, beta, **problem_params)
            if exact is None:
                raise ValueError(
                    f"problem {problem!r} has no exact solution; cannot measure errors"
                )
            errors: list[float] = []
            hs: list[float] = []
            failure = None
            for m in m_list:
                grid = Grid.from_horizon(t0, t_end, m)
                try:
                    if isinstance(prob.rhs, LinearRhs):
                        trace = solve_linear(prob, method, grid)
                    else:
                        trace = solve_nonlinear(prob, method, grid, newton)
                except SolverError as exc:
                    failure = f"M={m}: {exc}"
                    break
                err = float(np.max(np.abs(trace.y - exact(grid.times()))))
                errors.append(err)
                hs.append(grid.h)
            orders = eoc_orders(errors, hs)
            rows = [
                EocRow(m=m, h=h, max_error=e, order=o)
                for m, h, e, o in zip(m_list, hs, errors, orders)
            ]
            tables.append(
                EocTable(
                    method=str(method),
                    beta=float(prob.beta),
                    problem=problem,
                    rows=rows,
                    failure=failure,
                )
            )
    return tables
