"""Support functionals of the unit sphere.

At a sphere point over the graph of the boundary curve, the norm-one
functionals attaining 1 are exactly those built from slopes of supporting
lines of the curve; smoothness of the norm at the point is equivalent to the
slope interval collapsing.  At the endpoints x = +-1 the structure splits
into the classical five cases driven by the infimum of the left slopes and
the curve's end value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    ConcavityViolationError,
    DegenerateFunctionalError,
    DomainError,
    UndecidedCaseError,
)
from .boundary import boundary_value, derivative_bracket, slope_interval, smoothness_verdict
from .normspec import Functional, NormSpec, eval_norm

__all__ = [
    "SupportSet",
    "GateauxVerdict",
    "support_set_interior",
    "support_set_endpoint",
    "gateaux_at",
    "gateaux_on_vertical_edge",
    "directional_derivative_probe",
    "tail_slope_infimum",
    "functional_from_slope",
]


@dataclass(frozen=True)
class SupportSet:
    """Support functionals at one sphere point, with their parametrization.

    ``location`` is ("interior", x0) or ("endpoint", side); interior sets
    carry the slope interval generating them, endpoint sets carry the case
    label and its parameters (tail slope infimum and end value).
    ``functionals`` is a finite list of representatives.
    """

    location: Tuple[str, object]
    slope_interval: Optional[Tuple[float, float]]
    case_label: Optional[str]
    parameters: Optional[dict]
    functionals: Tuple[Functional, ...]

    def to_json_dict(self):
        kind, where = self.location
        if kind == "interior":
            loc = {"type": "interior", "x0": where}
        else:
            loc = {"type": "endpoint", "side": where}
        params = None
        if self.parameters is not None:
            a = self.parameters.get("a")
            if a is not None and math.isinf(a):
                a = "-inf"
            params = {"a": a, "f1": self.parameters.get("f1")}
        return {
            "location": loc,
            "case": self.case_label,
            "slope_interval": list(self.slope_interval) if self.slope_interval else None,
            "parameters": params,
            "representatives": [{"A": g.A, "B": g.B} for g in self.functionals],
        }


@dataclass(frozen=True)
class GateauxVerdict:
    """3-valued smoothness verdict at a sphere point, with the derivative
    functional when the verdict is smooth."""

    point: Tuple[float, float]
    verdict: str
    derivative: Optional[Functional] = None

    def __post_init__(self):
        if (self.verdict == "smooth") != (self.derivative is not None):
            raise DomainError("derivative must be present exactly for smooth verdicts")


def functional_from_slope(slope: float, x0: float, f0: float) -> Functional:
    """Support functional generated by a supporting-line slope at (x0, f0)."""
    den = slope * x0 - f0
    if abs(den) < 1e-14:
        raise DegenerateFunctionalError(
            f"degenerate denominator {den} at x0={x0} (invalid spec?)"
        )
    return Functional(A=slope / den, B=-1.0 / den)


def support_set_interior(
    spec: NormSpec, x0: float, samples: int = 33, tol: Tolerances = DEFAULT_TOL
) -> SupportSet:
    """Support set at the sphere point over x0 in (-1, 1).

    The generating slope interval is the (certified or exact) one-sided slope
    interval, clipped to the feasibility region where the supporting line
    stays above the height-1 level at x = 0; each sampled slope yields one
    representative functional.
    """
    if not -1.0 < float(x0) < 1.0:
        raise DomainError(f"x0 must lie in (-1, 1), got {x0}")
    if samples < 1:
        raise DomainError("samples must be >= 1")
    x0 = float(x0)
    f0 = boundary_value(spec, x0)
    lo, hi, _exact = slope_interval(spec, x0, tol=tol)
    # clip to {slope: f0 - slope*x0 >= 1}; exact slope intervals satisfy it,
    # numeric brackets may stick out by the bisection allowance
    if x0 > 0.0:
        hi = min(hi, (f0 - 1.0) / x0)
    elif x0 < 0.0:
        lo = max(lo, (f0 - 1.0) / x0)
    if lo > hi:
        if lo - hi <= 1e-9:
            lo = hi = 0.5 * (lo + hi)
        else:
            raise ConcavityViolationError(
                f"slope interval at x0={x0} is empty after the feasibility clip"
            )
    # an interval narrower than the certificate resolution yields numerically
    # identical functionals; one representative carries the same information
    if hi - lo <= 0.1 * tol.cert:
        slopes = [0.5 * (lo + hi)]
    else:
        slopes = [float(s) for s in np.linspace(lo, hi, samples)]
    reps = []
    for s in slopes:
        if f0 - s * x0 < 1.0 - 1e-10:
            raise ConcavityViolationError(
                f"sampled slope {s} at x0={x0} violates the supporting-line bound"
            )
        reps.append(functional_from_slope(s, x0, f0))
    return SupportSet(
        location=("interior", x0),
        slope_interval=(lo, hi),
        case_label=None,
        parameters=None,
        functionals=tuple(reps),
    )


def gateaux_at(spec: NormSpec, x0: float, tol: Tolerances = DEFAULT_TOL) -> GateauxVerdict:
    """Smoothness verdict of the norm at the sphere point over x0.

    The norm is Gateaux-differentiable there exactly when the boundary curve
    is differentiable at x0, in which case the derivative is the single
    support functional generated by the curve slope.
    """
    if not -1.0 < float(x0) < 1.0:
        raise DomainError(f"x0 must lie in (-1, 1), got {x0}")
    x0 = float(x0)
    f0 = boundary_value(spec, x0)
    interval = slope_interval(spec, x0, tol=tol)
    verdict = smoothness_verdict(interval, tol=tol)
    derivative = None
    if verdict == "smooth":
        derivative = functional_from_slope(0.5 * (interval[0] + interval[1]), x0, f0)
    return GateauxVerdict(point=(x0, f0), verdict=verdict, derivative=derivative)


def directional_derivative_probe(spec: NormSpec, point, direction, h: float) -> float:
    """One-sided finite difference of the norm at a unit vector.

    Requires the point to lie on the unit sphere within 1e-10 and a step no
    larger than 1e-3.
    """
    if not 0.0 < h <= 1e-3:
        raise DomainError(f"h must lie in (0, 1e-3], got {h}")
    px, py = float(point[0]), float(point[1])
    if abs(eval_norm(spec, (px, py)) - 1.0) > 1e-10:
        raise DomainError(f"point {point!r} is not on the unit sphere")
    dx, dy = float(direction[0]), float(direction[1])
    return (eval_norm(spec, (px + h * dx, py + h * dy)) - 1.0) / h


# ---------------------------------------------------------------------------
# endpoint analysis


def tail_slope_infimum(spec: NormSpec, tol: Tolerances = DEFAULT_TOL):
    """Estimate of the infimum of left slopes of the boundary curve on [0, 1).

    Evaluates certified upper bounds of the left slope on the dyadic grid
    x = 1 - 2^-k for k = 2..30 and takes the running minimum.  Returns
    (estimate, verdict, estimates) with verdict one of:

    * "diverging" -- numerically unbounded below: the running minimum either
      drops below the divergence threshold while at least doubling between
      k = 20 and k = 30, or exhibits that geometric doubling alone (the grid
      cannot reach the threshold for gently exploding slopes);
    * "finite" -- the estimate stabilized;
    * "undecided" -- threshold crossed without the doubling evidence.
    """
    analytic = spec.analytic_boundary
    running = math.inf
    estimates = []
    m20 = None
    for k in range(2, 31):
        x = 1.0 - 2.0**-k
        if analytic is not None:
            upper = analytic(x)[2]
        else:
            upper = derivative_bracket(spec, x, 2.0 ** -(k + 2), tol=tol).hi
        running = min(running, upper)
        estimates.append(running)
        if k == 20:
            m20 = running
    m30 = running
    doubling = m30 < -1.0 and m30 <= 2.0 * m20
    if m30 < tol.slope_divergence:
        verdict = "diverging" if doubling else "undecided"
    elif doubling:
        verdict = "diverging"
    else:
        verdict = "finite"
    estimate = -math.inf if verdict == "diverging" else min(m30, 0.0)
    return estimate, verdict, estimates


def _c_sweep(a: float, count: int):
    # geometric sweep of slopes c <= a < 0, densest near a
    return [a * 2.0 ** (j / 2.0) for j in range(max(count, 1))]


def support_set_endpoint(
    spec: NormSpec, side: str, samples: int = 33, tol: Tolerances = DEFAULT_TOL
) -> SupportSet:
    """Support set at the endpoint sphere point, classified into the five cases.

    Case (ii): end value 1 (the sup norm) -- the simplex of nonnegative
    functionals with coefficient sum 1.  Case (iii): tail slope unbounded --
    the single coordinate functional.  Case (iv): positive end value with
    finite negative tail slope -- a slope-parametrized family plus the
    coordinate functional.  Case (v): zero end value with finite negative
    tail slope -- the symmetric family (1, +-1/c) plus (1, 0).  The left
    endpoint is the coordinate reflection of the right-side analysis, which
    applies to the same norm by sign invariance.
    """
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    if samples < 1:
        raise DomainError("samples must be >= 1")
    f1 = boundary_value(spec, 1.0)
    slope_inf, verdict, _ = tail_slope_infimum(spec, tol=tol)

    if abs(f1 - 1.0) <= tol.zero_band:
        label = "ii"
        a_param = 0.0
        ts = np.linspace(0.0, 1.0, max(samples, 2))
        reps = [Functional(float(t), float(1.0 - t)) for t in ts]
    elif verdict == "diverging":
        label = "iii"
        a_param = -math.inf
        reps = [Functional(1.0, 0.0)]
    elif verdict == "undecided":
        raise UndecidedCaseError(
            f"tail slope estimate for {spec.label} is ambiguous",
            ("iii", "iv" if f1 > tol.zero_band else "v"),
        )
    else:
        a_param = slope_inf
        if a_param >= -tol.zero_band:
            raise UndecidedCaseError(
                f"flat tail slope with end value {f1} below 1", ("ii", "iv")
            )
        if f1 > tol.zero_band:
            label = "iv"
            reps = [
                functional_from_slope(c, 1.0, f1) for c in _c_sweep(a_param, samples - 1)
            ]
            reps.append(Functional(1.0, 0.0))
        elif f1 <= tol.zero_floor:
            label = "v"
            half = max((samples - 1) // 2, 1)
            reps = []
            for c in _c_sweep(a_param, half):
                reps.append(Functional(1.0, -1.0 / c))
                reps.append(Functional(1.0, 1.0 / c))
            reps.append(Functional(1.0, 0.0))
        else:
            raise UndecidedCaseError(
                f"end value {f1} lies in the ambiguity band "
                f"({tol.zero_floor}, {tol.zero_band}]",
                ("iv", "v"),
            )

    if side == "left":
        reps = [Functional(-g.A, g.B) for g in reps]
    return SupportSet(
        location=("endpoint", side),
        slope_interval=None,
        case_label=label,
        parameters={"a": a_param, "f1": f1},
        functionals=tuple(reps),
    )


def gateaux_on_vertical_edge(
    spec: NormSpec, b: float, tol: Tolerances = DEFAULT_TOL
) -> GateauxVerdict:
    """Smoothness verdict at a point (1, b) on a vertical sphere edge.

    Such points exist only when the curve's end value is positive; strictly
    inside the edge the norm is smooth with derivative equal to the first
    coordinate functional, while within tolerance of the edge corner the
    verdict is undecided.
    """
    f1 = boundary_value(spec, 1.0)
    if f1 <= tol.zero_band:
        raise DomainError(f"{spec.label} has no vertical sphere edge (end value {f1})")
    b = float(b)
    if abs(b) > f1 + tol.zero_band:
        raise DomainError(f"(1, {b}) lies outside the unit sphere (edge height {f1})")
    if abs(b) >= f1 - tol.zero_band:
        return GateauxVerdict(point=(1.0, b), verdict="undecided")
    return GateauxVerdict(point=(1.0, b), verdict="smooth", derivative=Functional(1.0, 0.0))
