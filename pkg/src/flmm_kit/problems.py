"""Closed registry of named test problems with analytic data.

Each entry builds a ProblemDef plus, where available, its exact solution
as a vectorized callable (None when no closed form exists). Keeping the
registry closed - no expression parsing - guarantees every nonlinear
problem ships an analytic Jacobian and the whole harness stays auditable.
"""

from __future__ import annotations

import math

import numpy as np

from .series import _as_beta
from .solver import LinearRhs, NonlinearRhs, ProblemDef

__all__ = ["PROBLEM_NAMES", "builtin_problem"]


def _paper_nonlinear(beta: float, params: dict):
    # f(t, y) = c1*t^(beta+4) - c2*t^(5-beta) + (t^(2*beta+4) - 2*t^5)^2 - y^2
    # manufactured so the exact solution is t^(2*beta+4) - 2*t^5 with y(0) = 0.
    c1 = math.gamma(2.0 * beta + 5.0) / math.gamma(beta + 5.0)
    c2 = 240.0 / math.gamma(6.0 - beta)
    p4 = beta + 4.0
    p5 = 5.0 - beta
    pe = 2.0 * beta + 4.0

    def exact(t):
        t = np.asarray(t, dtype=np.float64)
        return t**pe - 2.0 * t**5

    def f(t, y):
        z = t**pe - 2.0 * t**5
        return c1 * t**p4 - c2 * t**p5 + z * z - y * y

    def f_y(t, y):
        return -2.0 * y

    return ProblemDef(beta, 0.0, NonlinearRhs(f, f_y)), exact


def _poly2_linear(beta: float, params: dict):
    # lam = 0 with the fractional derivative of t^2 as source; exact y = t^2.
    c = math.gamma(3.0) / math.gamma(3.0 - beta)
    p = 2.0 - beta

    def exact(t):
        t = np.asarray(t, dtype=np.float64)
        return t**2

    return ProblemDef(beta, 0.0, LinearRhs(0.0, lambda t: c * t**p)), exact


def _constant(beta: float, params: dict):
    c = float(params.get("c", 1.0))

    def exact(t):
        return np.full_like(np.asarray(t, dtype=np.float64), c)

    return ProblemDef(beta, c, LinearRhs(0.0, None)), exact


def _test_lambda(beta: float, params: dict):
    # Decay/growth test equation f = lam*y; no closed-form solution is
    # provided (its exact solution is a Mittag-Leffler function).
    lam = complex(params.get("lam", -1.0))
    if lam.imag == 0.0:
        lam = lam.real
    return ProblemDef(beta, 1.0, LinearRhs(lam, None)), None


_REGISTRY = {
    "paper-nonlinear": _paper_nonlinear,
    "poly2-linear": _poly2_linear,
    "constant": _constant,
    "test-lambda": _test_lambda,
}

PROBLEM_NAMES = tuple(_REGISTRY)


def builtin_problem(name: str, beta, **params):
    """Build a registered problem; returns (ProblemDef, exact or None)."""
    b = _as_beta(beta)
    try:
        builder = _REGISTRY[name]
    except KeyError:
        raise ValueError(
            f"unknown problem {name!r}; available: {', '.join(PROBLEM_NAMES)}"
        ) from None
    return builder(b, params)
