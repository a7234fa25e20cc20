"""Truncated power-series arithmetic over real coefficients.

A coefficient series is a 1-d float array ``c`` where ``c[k]`` is the
coefficient of ``xi**k`` — no implicit shifts. Everything here is a pure
function of its inputs; summation orders are fixed so repeated calls are
bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FractionalOrder",
    "as_coeff_series",
    "grunwald_weights",
    "binom_neg_series",
    "cauchy_product",
    "miller_power",
    "series_reciprocal",
]


@dataclass(frozen=True)
class FractionalOrder:
    """Order of the fractional derivative, restricted to 0 < beta <= 1."""

    beta: float

    def __post_init__(self):
        beta = float(self.beta)
        if not 0.0 < beta <= 1.0:  # also rejects nan
            raise ValueError(f"fractional order must satisfy 0 < beta <= 1, got {self.beta!r}")
        object.__setattr__(self, "beta", beta)

    def __float__(self) -> float:
        return self.beta


def _as_beta(beta) -> float:
    """Validate an order given either as a float or a FractionalOrder."""
    if isinstance(beta, FractionalOrder):
        return beta.beta
    return FractionalOrder(beta).beta


def as_coeff_series(values) -> np.ndarray:
    """Validate and return a coefficient series as a float64 array.

    Requires length >= 1 and all entries finite.
    """
    c = np.asarray(values, dtype=np.float64)
    if c.ndim != 1 or c.size < 1:
        raise ValueError("coefficient series must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficient series entries must be finite")
    return c


def grunwald_weights(beta, n: int) -> np.ndarray:
    """Coefficients g_0..g_n of (1 - xi)**beta.

    Computed by the two-term recurrence ``g_0 = 1``,
    ``g_k = (1 - (beta+1)/k) * g_{k-1}``, which stays accurate for large k
    where the Gamma-ratio closed form would overflow.
    """
    b = _as_beta(beta)
    n = _as_count(n)
    if n == 0:
        return np.ones(1)
    k = np.arange(1.0, n + 1.0)
    factors = 1.0 - (b + 1.0) / k
    out = np.empty(n + 1)
    out[0] = 1.0
    np.cumprod(factors, out=out[1:])
    return out


def binom_neg_series(beta, n: int) -> np.ndarray:
    """Coefficients c_0..c_n of (1 + xi)**(-beta).

    Recurrence: ``c_0 = 1``, ``c_k = -c_{k-1} * (beta + k - 1) / k``.
    """
    b = _as_beta(beta)
    n = _as_count(n)
    if n == 0:
        return np.ones(1)
    k = np.arange(1.0, n + 1.0)
    factors = -(b + k - 1.0) / k
    out = np.empty(n + 1)
    out[0] = 1.0
    np.cumprod(factors, out=out[1:])
    return out


def cauchy_product(a, b, n: int) -> np.ndarray:
    """Coefficients 0..n of the product series a(xi)*b(xi).

    Missing coefficients beyond either operand's length count as zero.
    Each c_k is accumulated in a swap-symmetric pairing (term j together
    with term k-j), so ``cauchy_product(a, b, n)`` equals
    ``cauchy_product(b, a, n)`` bitwise.
    """
    a = as_coeff_series(a)
    b = as_coeff_series(b)
    n = _as_count(n)
    pa = np.zeros(n + 1)
    pb = np.zeros(n + 1)
    pa[: min(a.size, n + 1)] = a[: n + 1]
    pb[: min(b.size, n + 1)] = b[: n + 1]
    out = np.empty(n + 1)
    for k in range(n + 1):
        m = (k + 1) // 2
        paired = pa[:m] * pb[k : k - m : -1] if m else np.empty(0)
        if m:
            paired = paired + pa[k : k - m : -1] * pb[:m]
        acc = np.sum(paired)
        if k % 2 == 0:
            acc += pa[k // 2] * pb[k // 2]
        out[k] = acc
    return out


def miller_power(u, beta: float, n: int) -> np.ndarray:
    """Coefficients 0..n of u(xi)**beta for real beta (Miller's recurrence).

    ``f_0 = u_0**beta`` and, for m >= 1,
    ``f_m = (1/(m*u_0)) * sum_{k=1..m} (k*(beta+1) - m) * u_k * f_{m-k}``.
    Requires ``u_0 > 0`` (principal real branch).
    """
    u = as_coeff_series(u)
    beta = float(beta)
    n = _as_count(n)
    if u[0] <= 0.0:
        raise ValueError(f"miller_power needs a positive leading coefficient, got {u[0]!r}")
    f = np.zeros(n + 1)
    f[0] = u[0] ** beta
    kmax_all = u.size - 1
    for m in range(1, n + 1):
        kmax = min(m, kmax_all)
        if kmax == 0:
            break  # constant series: all higher coefficients stay zero
        k = np.arange(1.0, kmax + 1.0)
        stop = m - kmax - 1  # -1 only when kmax == m, where the slice must run to index 0
        terms = (k * (beta + 1.0) - m) * u[1 : kmax + 1] * f[m - 1 : (stop if stop >= 0 else None) : -1]
        f[m] = np.sum(terms) / (m * u[0])
    return f


def series_reciprocal(q, n: int) -> np.ndarray:
    """Coefficients 0..n of 1/q(xi); requires a nonzero constant term."""
    q = as_coeff_series(q)
    n = _as_count(n)
    if q[0] == 0.0:
        raise ValueError("series_reciprocal needs a nonzero constant term")
    r = np.zeros(n + 1)
    r[0] = 1.0 / q[0]
    kmax_all = q.size - 1
    for m in range(1, n + 1):
        kmax = min(m, kmax_all)
        if kmax == 0:
            break
        stop = m - kmax - 1
        terms = q[1 : kmax + 1] * r[m - 1 : (stop if stop >= 0 else None) : -1]
        r[m] = -np.sum(terms) / q[0]
    return r


def _as_count(n) -> int:
    n = int(n)
    if n < 0:
        raise ValueError(f"truncation length must be >= 0, got {n}")
    return n
