"""Implicit time stepping for scalar fractional initial value problems.

The unknown is marched in the shifted variable u = y - y0 (homogeneous
initial data), while the right-hand side f is always evaluated at the true
solution value y = u + y0:

    A_0 u_n + sum_{k=1..n} A_k u_{n-k} = h**beta * sum_j Q_j f(t_{n-j}, y_{n-j})

Linear problems (f = lam*y + s(t)) are solved step by step in closed form;
nonlinear problems run a scalar Newton iteration per step using the
supplied analytic partial derivative f_y. No starting-weight corrections
are applied, so full order is only observed for smooth solutions.

A single solve is strictly sequential (each step consumes the full
history); distinct solves share no mutable state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .methods import get_method, method_weights
from .series import _as_beta

__all__ = [
    "Grid",
    "LinearRhs",
    "NonlinearRhs",
    "ProblemDef",
    "NewtonConfig",
    "SolutionTrace",
    "SolverError",
    "SingularOperatorError",
    "NewtonConvergenceError",
    "history_convolution",
    "solve_linear",
    "solve_nonlinear",
    "reduce_initial",
]


class SolverError(RuntimeError):
    """A time-stepping run failed for a numerical reason."""


class SingularOperatorError(SolverError):
    """The per-step scalar operator w_0 - lam*h**beta*Q_0 vanished."""


class NewtonConvergenceError(SolverError):
    """Newton failed to converge at some step; carries step and residual."""

    def __init__(self, step: int, residual: float, iterations: int):
        self.step = step
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"Newton did not converge at step {step} "
            f"after {iterations} iterations (last residual {residual:.3e})"
        )


@dataclass(frozen=True)
class Grid:
    """Uniform grid t_n = t0 + n*h, n = 0..n_steps."""

    t0: float
    h: float
    n_steps: int

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError(f"step size must be positive, got {self.h}")
        if int(self.n_steps) < 1:
            raise ValueError(f"need at least one step, got {self.n_steps}")
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "n_steps", int(self.n_steps))

    @classmethod
    def from_horizon(cls, t0: float, t_end: float, n_steps: int) -> "Grid":
        """Grid spanning [t0, t_end] exactly with h = (t_end - t0)/n_steps."""
        n_steps = int(n_steps)
        if n_steps < 1:
            raise ValueError(f"need at least one step, got {n_steps}")
        return cls(t0, (float(t_end) - float(t0)) / n_steps, n_steps)

    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class LinearRhs:
    """f(t, y) = lam*y + source(t); source None means identically zero."""

    lam: complex
    source: Callable[[float], float] | None = None


@dataclass(frozen=True)
class NonlinearRhs:
    """f(t, y) with its analytic partial derivative f_y(t, y)."""

    f: Callable[[float, float], float]
    f_y: Callable[[float, float], float]


@dataclass(frozen=True)
class ProblemDef:
    """A scalar fractional initial value problem y(t0) = y0 of order beta."""

    beta: float
    y0: float
    rhs: LinearRhs | NonlinearRhs

    def __post_init__(self):
        object.__setattr__(self, "beta", _as_beta(self.beta))


@dataclass(frozen=True)
class NewtonConfig:
    """Stop when |y_k - y_{k-1}| <= tol*(1 + |y_k|), up to max_iters."""

    tol: float = 1e-12
    max_iters: int = 50

    def __post_init__(self):
        if not self.tol > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if int(self.max_iters) < 1:
            raise ValueError(f"need max_iters >= 1, got {self.max_iters}")


@dataclass(frozen=True)
class SolutionTrace:
    """Computed values y_n on a grid, plus per-step Newton counts if any."""

    grid: Grid
    y: np.ndarray
    method: str
    beta: float
    newton_iters: np.ndarray | None = None


def history_convolution(A, u, n: int):
    """sum_{k=1..n} A_k * u_{n-k} for n >= 1; pure, mutates nothing."""
    if n < 1:
        raise ValueError(f"history term needs n >= 1, got {n}")
    A = np.asarray(A)
    u = np.asarray(u)
    if u.shape[0] < n:
        raise ValueError(f"history needs at least {n} known values, got {u.shape[0]}")
    return np.sum(A[1 : n + 1] * u[n - 1 :: -1], axis=0)


def solve_linear(problem: ProblemDef, method, grid: Grid) -> SolutionTrace:
    """March a linear problem: each step solves the scalar update exactly.

    Supports complex lam (stability experiments off the real axis). Raises
    SingularOperatorError when w_0 - lam*h**beta*Q_0 vanishes.
    """
    if not isinstance(problem.rhs, LinearRhs):
        raise TypeError("solve_linear expects a problem with a LinearRhs")
    m = get_method(method)
    lam = problem.rhs.lam
    A, Q = method_weights(m, problem.beta, grid.n_steps)
    hb = grid.h**problem.beta
    t = grid.times()
    s = _eval_source(problem.rhs.source, t)

    dtype = np.result_type(np.float64, np.asarray(lam), s, np.asarray(problem.y0))
    y0 = dtype.type(problem.y0)
    den = A[0] - lam * hb * Q[0]
    if den == 0.0:
        raise SingularOperatorError(
            f"w0 - lam*h^beta*Q0 = 0 (lam*h^beta = {lam * hb}); the implicit update is singular"
        )

    n_steps = grid.n_steps
    u = np.zeros(n_steps + 1, dtype=dtype)
    f = np.empty(n_steps + 1, dtype=dtype)
    f[0] = lam * y0 + s[0]
    n_q = Q.size
    with np.errstate(over="raise", invalid="raise"):
        for n in range(1, n_steps + 1):
            try:
                c_n = history_convolution(A, u[:n], n)
                rhs = hb * Q[0] * (lam * y0 + s[n]) - c_n
                for j in range(1, min(n_q - 1, n) + 1):
                    rhs += hb * Q[j] * f[n - j]
                u[n] = rhs / den
                f[n] = lam * (u[n] + y0) + s[n]
            except FloatingPointError:
                raise SolverError(
                    f"solution overflowed at step {n} (t = {t[n]}); the run is unstable"
                ) from None
    return SolutionTrace(grid=grid, y=u + y0, method=m.name, beta=problem.beta)


def solve_nonlinear(
    problem: ProblemDef, method, grid: Grid, config: NewtonConfig = NewtonConfig()
) -> SolutionTrace:
    """March a nonlinear problem with one Newton solve per step.

    The Newton seed at step n is y_{n-1}; iteration counts are recorded in
    the trace. Raises NewtonConvergenceError or SingularOperatorError on
    failure, carrying the offending step.
    """
    if not isinstance(problem.rhs, NonlinearRhs):
        raise TypeError("solve_nonlinear expects a problem with a NonlinearRhs")
    m = get_method(method)
    rhs_f = problem.rhs.f
    rhs_fy = problem.rhs.f_y
    A, Q = method_weights(m, problem.beta, grid.n_steps)
    hb = grid.h**problem.beta
    t = grid.times()
    y0 = float(problem.y0)
    a0 = A[0]
    q0 = Q[0]
    n_q = Q.size

    n_steps = grid.n_steps
    u = np.zeros(n_steps + 1)
    f = np.empty(n_steps + 1)
    f[0] = rhs_f(t[0], y0)
    iters = np.zeros(n_steps + 1, dtype=np.int64)
    y_prev = y0
    for n in range(1, n_steps + 1):
        c_n = history_convolution(A, u[:n], n)
        known = c_n
        for j in range(1, min(n_q - 1, n) + 1):
            known -= hb * Q[j] * f[n - j]
        t_n = t[n]
        yk = y_prev
        residual = np.inf
        for k in range(1, config.max_iters + 1):
            residual = a0 * (yk - y0) + known - hb * q0 * rhs_f(t_n, yk)
            jac = a0 - hb * q0 * rhs_fy(t_n, yk)
            if jac == 0.0:
                raise SingularOperatorError(
                    f"singular Newton Jacobian at step {n} (iterate {yk!r})"
                )
            y_new = yk - residual / jac
            delta = abs(y_new - yk)
            yk = y_new
            if delta <= config.tol * (1.0 + abs(y_new)):
                break
        else:
            raise NewtonConvergenceError(n, abs(residual), config.max_iters)
        iters[n] = k
        u[n] = yk - y0
        f[n] = rhs_f(t_n, yk)
        y_prev = yk
    return SolutionTrace(
        grid=grid, y=u + y0, method=m.name, beta=problem.beta, newton_iters=iters
    )


def reduce_initial(problem: ProblemDef, t0: float = 0.0) -> ProblemDef:
    """Shift a problem to homogeneous initial data at the origin.

    Returns the problem in u = y - y0 on a clock starting at zero:
    f_reduced(t, u) = f(t + t0, u + y0), u(0) = 0. Solving the reduced
    problem and adding y0 back reproduces the original trace.
    """
    y0 = problem.y0
    if isinstance(problem.rhs, LinearRhs):
        lam = problem.rhs.lam
        src = problem.rhs.source
        if y0 == 0.0 and t0 == 0.0:
            return ProblemDef(problem.beta, 0.0, LinearRhs(lam, src))
        base = src if src is not None else (lambda t: 0.0)
        shifted = LinearRhs(lam, lambda t: lam * y0 + base(t + t0))
        return ProblemDef(problem.beta, 0.0, shifted)
    rhs = problem.rhs
    reduced = NonlinearRhs(
        f=lambda t, u: rhs.f(t + t0, u + y0),
        f_y=lambda t, u: rhs.f_y(t + t0, u + y0),
    )
    return ProblemDef(problem.beta, 0.0, reduced)


def _eval_source(source, t: np.ndarray) -> np.ndarray:
    if source is None:
        return np.zeros(t.size)
    vals = [source(float(tn)) for tn in t]
    return np.asarray(vals)
