"""Stability regions of the catalogued methods.

The boundary of the unstable region is the image of the unit circle under
the generating function, delta(e^{i*theta}). On the circle the factor
1 - e^{i*theta} is evaluated in polar form,

    1 - e^{i*theta} = b * e^{i*phi},  b = 2*sin(theta/2),  phi = theta/2 - pi/2,

which keeps fractional powers on the principal branch without branch-cut
artifacts near theta = 0. Membership in the unstable region is decided by
the winding number of the sampled boundary curve, cross-checkable against
a dynamic probe that actually integrates the test equation.

All computations here are pure; sweeps over many test values are safe to
run concurrently since every point is independent.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .methods import get_method, method_weights
from .series import _as_beta

__all__ = [
    "StabilityWedge",
    "BoundaryCurve",
    "SignCheckReport",
    "TangentProfile",
    "StabilityReport",
    "MembershipResult",
    "MinusOneComparison",
    "delta_on_circle",
    "boundary_curve",
    "real_part_sign_check",
    "tangent_profile",
    "a_stability_check",
    "unstable_membership",
    "dynamic_probe",
    "test_equation_sweep",
    "compare_at_minus_one",
]

# Half-width of the indeterminate band around the sampled boundary curve.
BOUNDARY_BAND = 1e-9
# Samples closer than this to the FT2 pole at theta = pi are excluded.
FT2_POLE_EXCLUSION = 1e-6


@dataclass(frozen=True)
class StabilityWedge:
    """The sector |arg z| <= beta*pi/2 where the true solution does not decay."""

    beta: float

    def __post_init__(self):
        object.__setattr__(self, "beta", _as_beta(self.beta))

    @property
    def half_angle(self) -> float:
        return self.beta * math.pi / 2.0

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        if z == 0:
            return True
        return abs(cmath.phase(z)) <= self.half_angle + tol


def _polar_one_minus_xi(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    b = 2.0 * np.sin(theta / 2.0)
    phi = theta / 2.0 - math.pi / 2.0
    return b, phi


def delta_on_circle(method, beta, theta) -> np.ndarray:
    """Generating function evaluated at xi = e^{i*theta} (principal branch).

    Poles (ft2 at theta = pi; fam1 at beta = 1, theta = pi) come out as
    complex infinity rather than being dropped.
    """
    m = get_method(method)
    b_order = _as_beta(beta)
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    b, phi = _polar_one_minus_xi(theta)
    frac = np.where(b > 0.0, b, 1.0) ** b_order * np.exp(1j * b_order * phi)
    frac = np.where(b > 0.0, frac, 0.0)
    xi = np.exp(1j * theta)
    if m.name == "gl1":
        out = frac
    elif m.name == "nflmm2":
        out = frac * ((1.0 + b_order / 2.0) - (b_order / 2.0) * xi)
    elif m.name == "fbdf2":
        out = frac * np.power((3.0 - xi) / 2.0, b_order)
    elif m.name == "fam1":
        q = (1.0 - b_order / 2.0) + (b_order / 2.0) * xi
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(q != 0.0, frac / np.where(q != 0.0, q, 1.0), np.inf + 0j)
    elif m.name == "ft2":
        # 2*(1-xi)/(1+xi) is purely imaginary on the circle: modulus
        # 2*|tan(theta/2)|, argument -pi/2 below theta = pi and +pi/2 above.
        half = theta / 2.0
        mod = 2.0 * np.abs(np.tan(half))
        sign = np.where(theta < math.pi, -1.0, 1.0)
        pole = np.abs(theta - math.pi) < 1e-12
        with np.errstate(over="ignore"):
            out = np.where(
                pole,
                np.inf + 0j,
                np.where(mod > 0.0, mod, 1.0) ** b_order
                * np.exp(1j * sign * b_order * math.pi / 2.0),
            )
        out = np.where((mod == 0.0) & ~pole, 0.0, out)
    else:  # pragma: no cover - catalogue is closed
        raise ValueError(f"no boundary evaluator for method {m.name!r}")
    return out


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled boundary delta(e^{i*theta}) on a uniform theta grid in [0, 2*pi)."""

    method: str
    beta: float
    thetas: np.ndarray
    values: np.ndarray

    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.values)


def boundary_curve(method, beta, n_samples: int) -> BoundaryCurve:
    """Sample the unstable-region boundary at n_samples uniform angles."""
    m = get_method(method)
    b = _as_beta(beta)
    n_samples = int(n_samples)
    if n_samples < 8:
        raise ValueError(f"need at least 8 samples, got {n_samples}")
    thetas = 2.0 * math.pi * np.arange(n_samples) / n_samples
    return BoundaryCurve(m.name, b, thetas, delta_on_circle(m, b, thetas))


def boundary_trig_parts(beta, theta) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(b, g, h) with Re delta = b**beta * g and Im delta = b**beta * h.

    Trigonometric form of the new method's boundary: with
    phi = theta/2 - pi/2,

        g = cos(beta*phi) + beta*cos(phi)*cos((beta+1)*phi)
        h = sin(beta*phi) + beta*cos(phi)*sin((beta+1)*phi)
    """
    b_order = _as_beta(beta)
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    b, phi = _polar_one_minus_xi(theta)
    g = np.cos(b_order * phi) + b_order * np.cos(phi) * np.cos((b_order + 1.0) * phi)
    h = np.sin(b_order * phi) + b_order * np.cos(phi) * np.sin((b_order + 1.0) * phi)
    return b, g, h


@dataclass(frozen=True)
class SignCheckReport:
    """Sign pattern of the new method's boundary on theta in (0, pi)."""

    beta: float
    n_samples: int
    passed: bool
    min_real: float
    max_imag: float
    theta_at_min_real: float


def real_part_sign_check(beta, n_samples: int) -> SignCheckReport:
    """Check Re delta > 0 and Im delta < 0 strictly inside (0, pi)."""
    b_order = _as_beta(beta)
    n_samples = int(n_samples)
    thetas = math.pi * np.arange(1, n_samples) / n_samples
    b, g, h = boundary_trig_parts(b_order, thetas)
    scale = b**b_order
    re = scale * g
    im = scale * h
    i_min = int(np.argmin(re))
    return SignCheckReport(
        beta=b_order,
        n_samples=n_samples,
        passed=bool(np.all(re > 0.0) and np.all(im < 0.0)),
        min_real=float(re[i_min]),
        max_imag=float(np.max(im)),
        theta_at_min_real=float(thetas[i_min]),
    )


@dataclass(frozen=True)
class TangentProfile:
    """Boundary tangent h/g on [0, pi]; increasing exactly when A-stable."""

    beta: float
    thetas: np.ndarray
    values: np.ndarray
    limit_at_zero: float
    unbounded_below: bool


def tangent_profile(beta, n_samples: int) -> TangentProfile:
    """Tangent h(theta)/g(theta) sampled on [0, pi].

    The theta -> 0 limit is -tan(beta*pi/2); at beta = 1 that limit is
    unbounded below (classical A-stability edge) and flagged as such.
    """
    b_order = _as_beta(beta)
    n_samples = int(n_samples)
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    thetas = math.pi * np.arange(n_samples) / (n_samples - 1)
    _, g, h = boundary_trig_parts(b_order, thetas)
    unbounded = b_order == 1.0
    with np.errstate(divide="ignore"):
        values = h / g
    limit = -np.inf if unbounded else -math.tan(b_order * math.pi / 2.0)
    return TangentProfile(
        beta=b_order,
        thetas=thetas,
        values=values,
        limit_at_zero=float(limit),
        unbounded_below=bool(unbounded),
    )


@dataclass(frozen=True)
class StabilityReport:
    """Wedge containment of the sampled boundary (A-stability test)."""

    method: str
    beta: float
    n_samples: int
    passed: bool
    max_abs_arg: float
    margin: float
    n_excluded: int


def a_stability_check(method, beta, n_samples: int, tol_angle: float = BOUNDARY_BAND) -> StabilityReport:
    """Check every finite boundary sample lies inside |arg z| <= beta*pi/2.

    Zero samples (the wedge apex) and pole samples are excluded and
    counted. Containment of the boundary in the wedge means the unstable
    region avoids the sector where the true solution decays.
    """
    curve = boundary_curve(method, beta, n_samples)
    half_angle = curve.beta * math.pi / 2.0
    values = curve.values
    usable = np.isfinite(values) & (values != 0.0)
    if curve.method == "ft2":
        usable &= np.abs(curve.thetas - math.pi) >= FT2_POLE_EXCLUSION
    args = np.abs(np.angle(values[usable]))
    max_arg = float(np.max(args)) if args.size else 0.0
    return StabilityReport(
        method=curve.method,
        beta=curve.beta,
        n_samples=int(n_samples),
        passed=bool(max_arg <= half_angle + tol_angle),
        max_abs_arg=max_arg,
        margin=float(half_angle - max_arg),
        n_excluded=int(np.count_nonzero(~usable)),
    )


@dataclass(frozen=True)
class MembershipResult:
    """Winding-number verdict for one test value against one boundary curve."""

    zeta: complex
    member: bool | None  # None when boundary-proximal (indeterminate)
    winding: int
    min_distance: float

    @property
    def indeterminate(self) -> bool:
        return self.member is None


def unstable_membership(method, beta, zeta: complex, n_samples: int = 4096) -> MembershipResult:
    """Whether zeta lies in the unstable region (nonzero winding number).

    Points within BOUNDARY_BAND of the sampled curve are flagged
    indeterminate instead of classified. The ft2 region is unbounded, so
    its membership is decided directly from the wedge angle, with the same
    indeterminate band applied to the angular distance from the rays.
    """
    m = get_method(method)
    b = _as_beta(beta)
    zeta = complex(zeta)
    if m.name == "ft2":
        return _ft2_membership(b, zeta)
    curve = boundary_curve(m, b, n_samples)
    rel = curve.values - zeta
    min_dist = float(np.min(np.abs(rel)))
    if min_dist < BOUNDARY_BAND:
        return MembershipResult(zeta, None, 0, min_dist)
    increments = np.angle(np.roll(rel, -1) / rel)
    winding = int(round(float(np.sum(increments)) / (2.0 * math.pi)))
    return MembershipResult(zeta, winding != 0, winding, min_dist)


def _ft2_membership(beta: float, zeta: complex) -> MembershipResult:
    half_angle = beta * math.pi / 2.0
    if zeta == 0:
        return MembershipResult(zeta, None, 0, 0.0)
    gap = abs(abs(cmath.phase(zeta)) - half_angle) * abs(zeta)
    if gap < BOUNDARY_BAND:
        return MembershipResult(zeta, None, 0, gap)
    return MembershipResult(zeta, abs(cmath.phase(zeta)) < half_angle, 0, gap)


def test_equation_sweep(method, beta, zetas, n_steps: int = 2000) -> list[str]:
    """Classify each zeta = lam*h**beta by integrating the test equation.

    Runs the scheme on f = lam*y with y0 = 1, h = 1, lam = zeta, for all
    zetas in one vectorized march. Verdicts: 'growth' when the trace
    exceeds 100*|y0| (or overflows), 'decay' when the envelope keeps
    shrinking across the second half of the run, else 'inconclusive'.

    The true fractional solution decays only algebraically (~ n**-beta),
    so decay is detected by comparing envelope maxima around n_steps/2 and
    n_steps rather than by an absolute smallness threshold.
    """
    b = _as_beta(beta)
    zetas = np.atleast_1d(np.asarray(zetas, dtype=np.complex128))
    n_z = zetas.size
    A, Q = method_weights(method, b, n_steps)
    if Q.size != 1:
        raise ValueError("dynamic probe supports methods with a scalar f-side only")
    den = A[0] - zetas  # h = 1, Q = [1]
    singular = den == 0.0
    den = np.where(singular, 1.0, den)

    u = np.zeros((n_steps + 1, n_z), dtype=np.complex128)
    env = np.empty((n_steps + 1, n_z))
    env[0] = 1.0
    grown = np.zeros(n_z, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_steps + 1):
            c_n = A[1 : n + 1] @ u[n - 1 :: -1]
            u_n = (zetas - c_n) / den
            y_abs = np.abs(u_n + 1.0)
            blown = ~np.isfinite(y_abs) | (y_abs > 1e8)
            grown |= blown
            u_n = np.where(grown, 0.0, u_n)
            y_abs = np.where(grown, np.inf, y_abs)
            u[n] = u_n
            env[n] = y_abs

    growth = grown | (np.max(np.where(np.isfinite(env), env, np.inf), axis=0) > 100.0)
    half = n_steps // 2
    w = max(n_steps // 20, 1)
    mid = np.max(env[half - w : half + w + 1], axis=0)
    tail = np.max(env[n_steps - 2 * w :], axis=0)
    with np.errstate(invalid="ignore"):
        ratio = np.where(mid > 0.0, tail / mid, 1.0)
    verdicts = []
    for i in range(n_z):
        if singular[i]:
            verdicts.append("inconclusive")
        elif growth[i]:
            verdicts.append("growth")
        elif ratio[i] <= 0.9:
            verdicts.append("decay")
        elif ratio[i] >= 1.1:
            verdicts.append("growth")
        else:
            verdicts.append("inconclusive")
    return verdicts


def dynamic_probe(method, beta, zeta: complex, n_steps: int = 2000) -> str:
    """Single-value version of test_equation_sweep."""
    return test_equation_sweep(method, beta, [zeta], n_steps)[0]


@dataclass(frozen=True)
class MinusOneComparison:
    """Boundary values delta(-1): extreme points of the unstable regions."""

    beta: float
    fbdf2: float
    nflmm2: float
    fam1: float
    ft2: float
    strictly_ordered: bool


def compare_at_minus_one(beta) -> MinusOneComparison:
    """Closed-form delta(-1) for the order-2 methods, in increasing order.

    Returns (4**beta, 2**beta*(1+beta), 2**beta/(1-beta), inf). The strict
    ordering holds for 0 < beta < 1; at beta = 1 the fam1 value is itself
    infinite and the ordering degenerates (reported, not raised).
    """
    b = _as_beta(beta)
    v_fbdf2 = 4.0**b
    v_nflmm2 = 2.0**b * (1.0 + b)
    v_fam1 = 2.0**b / (1.0 - b) if b < 1.0 else math.inf
    v_ft2 = math.inf
    strict = v_fbdf2 < v_nflmm2 < v_fam1 < v_ft2
    if b < 1.0 and not strict:
        raise RuntimeError(f"delta(-1) ordering violated at beta={b}")
    return MinusOneComparison(b, v_fbdf2, v_nflmm2, v_fam1, v_ft2, bool(strict))
