"""Catalogue of implicit fractional linear multistep methods.

Each method is described by the weight series A(xi) applied to the unknown
values (the expansion of its generating function, or of the numerator part
when the method is kept in f-side form) and a short polynomial Q(xi)
applied to the right-hand-side values:

    sum_k A_k y_{n-k} = h**beta * sum_j Q_j f_{n-j}

Catalogued methods and their generating functions:

    gl1     (1 - xi)**beta                                   order 1
    nflmm2  (1 - xi)**beta * ((1 + beta/2) - (beta/2)*xi)    order 2
    fbdf2   (3/2 - 2*xi + xi**2/2)**beta                     order 2
    fam1    (1 - xi)**beta / ((1 - beta/2) + (beta/2)*xi)    order 2
    ft2     (2*(1 - xi)/(1 + xi))**beta                      order 2

fam1 is kept in f-side form (A = Grunwald weights, Q = the denominator
coefficients), which is equivalent and cheaper per step than expanding the
reciprocal into the y-side series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .series import (
    _as_beta,
    binom_neg_series,
    cauchy_product,
    grunwald_weights,
    miller_power,
)

__all__ = [
    "MethodDescriptor",
    "METHODS",
    "METHOD_NAMES",
    "get_method",
    "nflmm2_weights",
    "method_weights",
    "consistency_defect",
    "estimate_order",
]

# Sampling grid used by estimate_order: x = 2**-j.
ORDER_SAMPLE_EXPONENTS = range(4, 11)
# Defects at or below this level are treated as numerically unresolvable.
DEFECT_FLOOR = 1e-13


def nflmm2_weights(beta, n: int) -> np.ndarray:
    """Weights w_k = p0*g_k + p1*g_{k-1} with p0 = 1 + beta/2, p1 = -beta/2.

    These are the coefficients of (1 - xi)**beta * (p0 + p1*xi); for
    beta = 1 they reduce to the classical BDF2 weights [3/2, -2, 1/2].
    """
    b = _as_beta(beta)
    g = grunwald_weights(b, n)
    p0 = 1.0 + b / 2.0
    p1 = -b / 2.0
    w = p0 * g
    w[1:] += p1 * g[:-1]
    return w


def _gl1_series(beta: float, n: int) -> np.ndarray:
    return grunwald_weights(beta, n)


def _fbdf2_series(beta: float, n: int) -> np.ndarray:
    return miller_power([1.5, -2.0, 0.5], beta, n)


def _ft2_series(beta: float, n: int) -> np.ndarray:
    prod = cauchy_product(grunwald_weights(beta, n), binom_neg_series(beta, n), n)
    return (2.0**beta) * prod


def _unit_poly(beta: float) -> np.ndarray:
    return np.ones(1)


def _fam1_poly(beta: float) -> np.ndarray:
    return np.array([1.0 - beta / 2.0, beta / 2.0])


@dataclass(frozen=True)
class MethodDescriptor:
    """An implicit FLMM: y-side weight rule, f-side polynomial, claimed order."""

    name: str
    declared_order: int
    y_series: Callable[[float, int], np.ndarray]
    f_poly: Callable[[float], np.ndarray]

    def __post_init__(self):
        q = self.f_poly(0.5)
        if q.size < 1 or q[0] == 0.0:
            raise ValueError(f"method {self.name!r} is not implicit (Q_0 must be nonzero)")


METHODS = {
    "gl1": MethodDescriptor("gl1", 1, _gl1_series, _unit_poly),
    "nflmm2": MethodDescriptor("nflmm2", 2, nflmm2_weights, _unit_poly),
    "fbdf2": MethodDescriptor("fbdf2", 2, _fbdf2_series, _unit_poly),
    "fam1": MethodDescriptor("fam1", 2, _gl1_series, _fam1_poly),
    "ft2": MethodDescriptor("ft2", 2, _ft2_series, _unit_poly),
}

METHOD_NAMES = tuple(METHODS)


def get_method(name: str | MethodDescriptor) -> MethodDescriptor:
    """Look up a catalogued method by its canonical name."""
    if isinstance(name, MethodDescriptor):
        return name
    try:
        return METHODS[str(name).lower()]
    except KeyError:
        raise ValueError(
            f"unknown method {name!r}; available: {', '.join(METHOD_NAMES)}"
        ) from None


def method_weights(method, beta, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (A, Q): y-side weights A_0..A_n and the f-side polynomial."""
    m = get_method(method)
    b = _as_beta(beta)
    return m.y_series(b, n), m.f_poly(b)


def consistency_defect(method, beta, x: float, *, length: int | None = None) -> float:
    """Relative defect of the truncated scheme applied to exp(-x*t)-type data.

    Evaluates ``sum_k A_k e^{-kx} / (x**beta * sum_j Q_j e^{-jx}) - 1``.
    For a method of order p this behaves like O(x**p) as x -> 0. The
    truncation length defaults to ceil(40/x) so the dropped tail is below
    1e-14.
    """
    b = _as_beta(beta)
    x = float(x)
    if not 0.0 < x <= 0.5:
        raise ValueError(f"defect probe requires 0 < x <= 0.5, got {x}")
    if length is None:
        length = math.ceil(40.0 / x)
    A, Q = method_weights(method, b, length)
    return _defect_from_weights(A, Q, b, x)


def _defect_from_weights(A: np.ndarray, Q: np.ndarray, beta: float, x: float) -> float:
    decay = np.exp(-x * np.arange(A.size))
    num = float(np.sum(A * decay))
    den = float(np.sum(Q * decay[: Q.size]))
    return num / (x**beta * den) - 1.0


def estimate_order(method, beta, *, exponents=ORDER_SAMPLE_EXPONENTS) -> float:
    """Least-squares slope of log|defect| versus log x over x = 2**-j.

    Returns ``math.inf`` when every sampled defect is below the numerical
    floor (the method's order exceeds what this probe can resolve).
    """
    b = _as_beta(beta)
    xs = np.array([2.0**-j for j in exponents])
    n_max = math.ceil(40.0 / xs.min())
    A, Q = method_weights(method, b, n_max)
    defects = np.array([abs(_defect_from_weights(A, Q, b, x)) for x in xs])
    usable = defects > DEFECT_FLOOR
    if np.count_nonzero(usable) < 2:
        return math.inf
    slope = np.polyfit(np.log(xs[usable]), np.log(defects[usable]), 1)[0]
    return float(slope)
