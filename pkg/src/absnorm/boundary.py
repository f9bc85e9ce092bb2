"""Upper boundary curve of the unit ball and derived quantities.

For an absolute normalized norm the unit sphere over x in (-1, 1) is the
graph of a concave, even curve with value 1 at 0; this module computes that
curve (with certified brackets), its one-sided slope intervals, the
mean-value certification, the sphere parametrization along the segment from
(1, 0) to (0, 1), and the strict-convexity/monotonicity classification.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULT_TOL, H_LADDER, Tolerances
from .errors import ConcavityViolationError, DomainError
from .normspec import NormSpec, boundary_function, eval_norm, eval_norm_many

__all__ = [
    "BoundaryCurve",
    "DerivativeBracket",
    "ConvexityReport",
    "boundary_value",
    "boundary_bracket",
    "derivative_bracket",
    "slope_interval",
    "smoothness_verdict",
    "endpoint_limit_probe",
    "uniqueness_probe",
    "mvt_check",
    "psi_curve",
    "classify_convexity",
    "tabulate",
    "table_to_csv",
    "table_to_json",
]


def _check_domain(x: float, closed: bool = True) -> float:
    x = float(x)
    if math.isnan(x) or (abs(x) > 1.0 if closed else abs(x) >= 1.0):
        limit = "[-1, 1]" if closed else "(-1, 1)"
        raise DomainError(f"x must lie in {limit}, got {x}")
    return x


def boundary_value(spec: NormSpec, x: float) -> float:
    """Height of the upper boundary curve at x in [-1, 1].

    Interior values are the unique root of "norm of (x, t) equals 1" on
    (0, 1], computed from the analytic data when the spec carries it and by
    predicate bisection otherwise; at |x| = 1 the value is the one-sided
    limit, which for a closed unit ball coincides with the supremum of the
    vertical section and is computed by the same bisection.
    """
    x = _check_domain(x)
    if spec.analytic_boundary is not None:
        return spec.analytic_boundary(x)[0]
    lo, hi = spec.plan.kernel.boundary_bracket(x)
    return 0.5 * (lo + hi)


def boundary_bracket(spec: NormSpec, x: float) -> Tuple[float, float]:
    """Certified enclosure [lo, hi] of the boundary height at x."""
    x = _check_domain(x)
    if spec.analytic_boundary is not None:
        f = spec.analytic_boundary(x)[0]
        return (f, f)
    return spec.plan.kernel.boundary_bracket(x)


@dataclass(frozen=True)
class DerivativeBracket:
    """Certified interval around the one-sided slopes of the boundary curve.

    By concavity the forward difference quotient underestimates the right
    slope and the backward quotient overestimates the left slope, so
    [lo, hi] = [forward - allowance, backward + allowance] contains
    [right slope, left slope] whenever curve values are accurate to the
    root-finding tolerance.
    """

    x: float
    lo: float
    hi: float
    h_used: float


def derivative_bracket(
    spec: NormSpec, x: float, h: float, tol: Tolerances = DEFAULT_TOL
) -> DerivativeBracket:
    x = _check_domain(x, closed=False)
    if h <= 0.0:
        raise DomainError(f"h must be positive, got {h}")
    if abs(x) + h >= 1.0:
        raise DomainError(f"x +- h must stay inside (-1, 1), got x={x}, h={h}")
    f0 = boundary_value(spec, x)
    fwd = (boundary_value(spec, x + h) - f0) / h
    bwd = (f0 - boundary_value(spec, x - h)) / h
    allowance = 2.0 * tol.root / h
    lo = fwd - allowance
    hi = bwd + allowance
    if lo > hi:
        raise ConcavityViolationError(
            f"difference quotients cross at x={x}, h={h}: forward {fwd} > backward {bwd} "
            "beyond the root-finding allowance (invalid spec?)"
        )
    return DerivativeBracket(x=x, lo=lo, hi=hi, h_used=h)


def slope_interval(
    spec: NormSpec, x: float, tol: Tolerances = DEFAULT_TOL, ladder=H_LADDER
) -> Tuple[float, float, bool]:
    """Interval [lo, hi] containing [right slope, left slope] at x.

    Returns (lo, hi, exact).  Analytic specs give the exact one-sided slopes;
    otherwise brackets over the step ladder are intersected.
    """
    x = _check_domain(x, closed=False)
    if spec.analytic_boundary is not None:
        _, d_plus, d_minus = spec.analytic_boundary(x)
        return (d_plus, d_minus, True)
    room = 1.0 - abs(x)
    hs = [h for h in ladder if h < room]
    if not hs:
        hs = [room / 2.0]
    lo = -math.inf
    hi = math.inf
    for h in hs:
        br = derivative_bracket(spec, x, h, tol=tol)
        lo = max(lo, br.lo)
        hi = min(hi, br.hi)
    if lo > hi:
        if lo - hi <= 1e-12:
            mid = 0.5 * (lo + hi)
            lo = hi = mid
        else:
            raise ConcavityViolationError(
                f"ladder brackets at x={x} have empty intersection (width {hi - lo})"
            )
    return (lo, hi, False)


def smoothness_verdict(interval: Tuple[float, float, bool], tol: Tolerances = DEFAULT_TOL) -> str:
    """3-valued differentiability verdict from a slope interval."""
    lo, hi, exact = interval
    width = hi - lo
    if exact:
        return "smooth" if width <= 1e-13 else "corner"
    if width < tol.smooth:
        return "smooth"
    if width > tol.corner:
        return "corner"
    return "undecided"


def endpoint_limit_probe(spec: NormSpec, side: str = "right", max_k: int = 40,
                         stagnation: float = 1e-11):
    """Dyadic approach sequence toward the endpoint, with stagnation cutoff.

    Returns (estimate, values).  This probe converges slowly for curves with
    unbounded slope; :func:`boundary_value` at |x| = 1 is the accurate path.
    """
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    sign = 1.0 if side == "right" else -1.0
    values = []
    prev = None
    for k in range(1, max_k + 1):
        v = boundary_value(spec, sign * (1.0 - 2.0**-k))
        values.append(v)
        if prev is not None and abs(v - prev) < stagnation:
            break
        prev = v
    return values[-1], values


def uniqueness_probe(spec: NormSpec, x: float, grid: int) -> int:
    """Number of contact clusters of t -> norm(x, t) - 1 on (0, 1].

    Grid values within 1e-10 of zero are merged into one cluster; a valid
    spec has exactly one cluster (the unique boundary crossing).
    """
    x = _check_domain(x, closed=False)
    if grid < 100:
        raise DomainError(f"grid must be >= 100, got {grid}")
    ts = np.arange(1, grid + 1, dtype=np.float64) / grid
    vals = eval_norm_many(spec, np.full(grid, x), ts) - 1.0
    clusters = 0
    below = True  # the limit toward t = 0 is |x| - 1 < 0
    for v in vals:
        if v < -1e-10:
            below = True
        else:
            if below:
                clusters += 1
            below = False
    return clusters


def mvt_check(spec: NormSpec, a: float, b: float, grid: int,
              tol: Tolerances = DEFAULT_TOL) -> bool:
    """Certify that the chord slope over [a, b] lies in the sampled slope range.

    The grid midpoints with half-cell steps tile [a, b], so the chord slope
    is a convex combination of the sampled difference quotients and must lie
    within [min of bracket lows - tol, max of bracket highs + tol].
    """
    a = _check_domain(a, closed=False)
    b = _check_domain(b, closed=False)
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    if grid < 1:
        raise DomainError("grid must be >= 1")
    quotient = (boundary_value(spec, b) - boundary_value(spec, a)) / (b - a)
    delta = (b - a) / grid
    h = delta / 2.0
    lows = []
    highs = []
    for j in range(grid):
        xj = a + (j + 0.5) * delta
        br = derivative_bracket(spec, xj, h, tol=tol)
        lows.append(br.lo)
        highs.append(br.hi)
    return min(lows) - tol.mvt <= quotient <= max(highs) + tol.mvt


def psi_curve(spec: NormSpec, t: float) -> float:
    """Norm along the sphere chord parametrization (1-t, t), t in [0, 1]."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    return eval_norm(spec, (1.0 - t, t))


# ---------------------------------------------------------------------------
# strict convexity / strict monotonicity classification


@dataclass(frozen=True)
class ConvexityReport:
    strictly_convex: str
    strictly_monotone: str
    min_excess: float
    end_value: float
    min_gap: float

    def to_json_dict(self):
        return {
            "strictly_convex": self.strictly_convex,
            "strictly_monotone": self.strictly_monotone,
            "min_excess": self.min_excess,
            "end_value": self.end_value,
            "min_gap": self.min_gap,
        }


def _structural_decrease(spec: NormSpec) -> Optional[str]:
    # exact shape knowledge: p-norm curves are strictly decreasing for finite
    # p and flat for the sup norm; curve gauges expose their segment slopes
    if spec.kind == "p":
        return "no" if math.isinf(spec.p) else "yes"
    if spec.kind == "curve":
        pts = spec.points
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if (y1 - y0) / (x1 - x0) > -1e-15:
                return "no"
        return "yes"
    return None


def classify_convexity(spec: NormSpec, grid: int = 101,
                       tol: Tolerances = DEFAULT_TOL) -> ConvexityReport:
    """3-valued strict-convexity and strict-monotonicity verdicts.

    Strict convexity of the space is equivalent to strict concavity of the
    boundary curve together with value 0 at x = 1; strict monotonicity of the
    norm is equivalent to strict decrease on [0, 1) together with value 0 at
    x = 1.  Sampled evidence inside the dead zone yields "undecided".
    """
    if grid < 3:
        raise DomainError("grid must be >= 3")
    from .normspec import is_polygonal  # local alias, avoids re-export cycles

    f = boundary_function(spec)
    xs = np.linspace(-1.0, 1.0, grid + 2)[1:-1]
    heights = np.array([f(x) for x in xs])
    excess = heights[1:-1] - 0.5 * (heights[:-2] + heights[2:])
    min_excess = float(excess.min())

    f1 = boundary_value(spec, 1.0)
    end_zero = "yes" if f1 <= tol.zero_band else "no"

    if is_polygonal(spec):
        concave_part = "no"
    elif min_excess > tol.strict_concave:
        concave_part = "yes"
    elif min_excess < -tol.concave_slack:
        concave_part = "no"
    else:
        concave_part = "undecided"

    if concave_part == "no" or end_zero == "no":
        strictly_convex = "no"
    elif concave_part == "yes" and end_zero == "yes":
        strictly_convex = "yes"
    else:
        strictly_convex = "undecided"

    half = np.linspace(0.0, 1.0, grid + 1)
    hv = np.array([f(x) for x in half])
    gaps = hv[:-1] - hv[1:]
    min_gap = float(gaps.min())

    decrease = _structural_decrease(spec)
    if decrease is None:
        if min_gap > 1e-12:
            decrease = "yes"
        elif is_polygonal(spec) and min_gap > -tol.concave_slack:
            decrease = "no"  # a genuinely flat piece of a polygonal curve
        elif min_gap < -tol.concave_slack:
            decrease = "no"
        else:
            decrease = "undecided"

    if end_zero == "no" or decrease == "no":
        strictly_monotone = "no"
    elif end_zero == "yes" and decrease == "yes":
        strictly_monotone = "yes"
    else:
        strictly_monotone = "undecided"

    return ConvexityReport(
        strictly_convex=strictly_convex,
        strictly_monotone=strictly_monotone,
        min_excess=min_excess,
        end_value=f1,
        min_gap=min_gap,
    )


# ---------------------------------------------------------------------------
# cached curve object and tabulation


class BoundaryCurve:
    """Memoizing view of the boundary curve of one spec.

    Values are cached keyed by the exact float input; the cache is guarded by
    a lock so concurrent readers never observe torn entries (duplicated work
    is allowed, inconsistent values are not).
    """

    def __init__(self, spec: NormSpec, tolerance: float = DEFAULT_TOL.root):
        self.spec = spec
        self.tolerance = tolerance
        self._cache = {}
        self._lock = threading.Lock()

    def bracket(self, x: float) -> Tuple[float, float]:
        x = float(x)
        with self._lock:
            hit = self._cache.get(x)
        if hit is not None:
            return hit
        value = boundary_bracket(self.spec, x)
        with self._lock:
            self._cache.setdefault(x, value)
        return value

    def value(self, x: float) -> float:
        lo, hi = self.bracket(x)
        return 0.5 * (lo + hi)

    @property
    def endpoint_values(self) -> Tuple[float, float]:
        return (self.value(-1.0), self.value(1.0))

    def cached_items(self):
        with self._lock:
            return sorted(self._cache.items())

    def check_invariants(self) -> None:
        """Raise if cached values violate the curve's defining properties."""
        items = self.cached_items()
        tol = max(self.tolerance, 1e-10)
        by_x = dict(items)
        for x, (lo, hi) in items:
            mid = 0.5 * (lo + hi)
            if abs(x) < 1.0 and not (0.0 < mid <= 1.0 + tol):
                raise AssertionError(f"cached height {mid} at x={x} outside (0, 1]")
            other = by_x.get(-x)
            if other is not None and abs(mid - 0.5 * (other[0] + other[1])) > tol:
                raise AssertionError(f"cached heights at +-{x} differ beyond tolerance")
        if 0.0 in by_x:
            lo, hi = by_x[0.0]
            if abs(0.5 * (lo + hi) - 1.0) > tol:
                raise AssertionError("cached height at 0 is not 1")
        xs = [x for x, _ in items]
        vals = [0.5 * (lo + hi) for _, (lo, hi) in items]
        for i in range(len(xs) - 2):
            x0, x1, x2 = xs[i], xs[i + 1], xs[i + 2]
            lam = (x2 - x1) / (x2 - x0)
            if vals[i + 1] < lam * vals[i] + (1.0 - lam) * vals[i + 2] - tol:
                raise AssertionError(f"cached triple at {x0}, {x1}, {x2} breaks concavity")


def tabulate(spec: NormSpec, n: int):
    """Rows (x, f, flo, fhi) on the inclusive n-point grid over [-1, 1]."""
    if n < 2:
        raise DomainError("n must be >= 2")
    xs = np.linspace(-1.0, 1.0, n)
    if spec.analytic_boundary is not None:
        rows = []
        for x in xs:
            f = spec.analytic_boundary(x)[0]
            rows.append((float(x), f, f, f))
        return rows
    flo = np.empty(n)
    fhi = np.empty(n)
    spec.plan.kernel.boundary_batch(np.ascontiguousarray(xs), flo, fhi)
    return [
        (float(x), float(0.5 * (lo + hi)), float(lo), float(hi))
        for x, lo, hi in zip(xs, flo, fhi)
    ]


def _fmt17(v: float) -> str:
    return format(v, ".17g")


def table_to_csv(rows) -> str:
    lines = ["x,f,flo,fhi"]
    for x, f, lo, hi in rows:
        lines.append(",".join(_fmt17(v) for v in (x, f, lo, hi)))
    return "\n".join(lines) + "\n"


def table_to_json(rows) -> str:
    payload = [
        {"x": x, "f": f, "flo": lo, "fhi": hi} for x, f, lo, hi in rows
    ]
    return json.dumps(payload, indent=2) + "\n"
