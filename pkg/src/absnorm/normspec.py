"""Absolute normalized norms on the plane.

A :class:`NormSpec` describes a norm that depends only on coordinate absolute
values and equals 1 on both axis unit vectors.  Three constructions are
supported and compose freely:

* ``p`` -- the classical p-norm for p in [1, inf],
* ``mix`` -- a convex combination of two specs,
* ``curve`` -- the Minkowski gauge of the symmetrized region under a concave,
  nonincreasing polygonal profile from (0, 1) to (1, y1).

Specs are immutable and hashable; evaluation is delegated to the kernel
backend (compiled or pure) through a flattened plan that is cached per spec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple

import numpy as np

from ._backend import Kernel
from .errors import DomainError, SpecError, SpecParseError

__all__ = [
    "NormSpec",
    "Functional",
    "ValidationReport",
    "eval_norm",
    "eval_norm_many",
    "validate_norm",
    "dual_norm",
    "gauge_from_curve",
    "swap_spec",
    "parse_spec",
    "format_spec",
    "boundary_function",
    "is_polygonal",
]

_VERTEX_MERGE_TOL = 1e-14
_SLOPE_TOL = 1e-12


# ---------------------------------------------------------------------------
# spec type


@dataclass(frozen=True)
class NormSpec:
    """An absolute, normalized norm on the plane.

    ``analytic_boundary``, when present, maps x in [-1, 1] to the triple
    (curve value, right slope, left slope) of the upper boundary curve of the
    unit ball; it is attached automatically by the built-in constructors
    (closed forms for p-norms, the interpolant itself for curve gauges) and
    is excluded from equality and hashing.
    """

    kind: str
    p: Optional[float] = None
    lam: Optional[float] = None
    left: Optional["NormSpec"] = None
    right: Optional["NormSpec"] = None
    points: Optional[Tuple[Tuple[float, float], ...]] = None
    label: str = ""
    analytic_boundary: Optional[Callable[[float], Tuple[float, float, float]]] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        if self.kind == "p":
            if self.p is None or math.isnan(self.p) or self.p < 1.0:
                raise SpecError(f"p-norm exponent must be >= 1, got {self.p}")
        elif self.kind == "mix":
            if self.lam is None or not (0.0 <= self.lam <= 1.0):
                raise SpecError(f"mixture weight must lie in [0, 1], got {self.lam}")
            if not isinstance(self.left, NormSpec) or not isinstance(self.right, NormSpec):
                raise SpecError("mixture requires two component specs")
        elif self.kind == "curve":
            object.__setattr__(self, "points", _clean_curve_points(self.points))
        else:
            raise SpecError(f"unknown spec kind {self.kind!r}")
        if not self.label:
            object.__setattr__(self, "label", format_spec(self))

    # constructors ---------------------------------------------------------

    @staticmethod
    def p_norm(p: float, label: str = "") -> "NormSpec":
        p = float(p)
        spec = NormSpec(kind="p", p=p, label=label)
        object.__setattr__(spec, "analytic_boundary", _p_boundary(p))
        return spec

    @staticmethod
    def mixture(lam: float, left: "NormSpec", right: "NormSpec", label: str = "") -> "NormSpec":
        return NormSpec(kind="mix", lam=float(lam), left=left, right=right, label=label)

    @staticmethod
    def curve_gauge(points, label: str = "") -> "NormSpec":
        spec = NormSpec(kind="curve", points=tuple(points), label=label)
        object.__setattr__(spec, "analytic_boundary", _curve_boundary(spec.points))
        return spec

    def without_analytic(self) -> "NormSpec":
        """Clone with the analytic boundary dropped, forcing the numeric path."""
        return replace(self, analytic_boundary=None)

    # evaluation -----------------------------------------------------------

    @property
    def plan(self) -> "Plan":
        return _plan_for(self)

    def __call__(self, a: float, b: float) -> float:
        return eval_norm(self, (a, b))


def gauge_from_curve(points, label: str = "") -> NormSpec:
    """Build the curve-gauge norm whose unit ball is the symmetrized region
    under the piecewise-linear interpolant of ``points``."""
    return NormSpec.curve_gauge(points, label=label)


def _clean_curve_points(points):
    if not points:
        raise SpecError("curve gauge requires at least two points")
    pts = [(float(x), float(y)) for x, y in points]
    merged = [pts[0]]
    for x, y in pts[1:]:
        px, py = merged[-1]
        if abs(x - px) <= _VERTEX_MERGE_TOL:
            if abs(y - py) > _VERTEX_MERGE_TOL:
                raise SpecError(f"curve points share x={x} with different heights {py} and {y}")
            continue
        if x < px:
            raise SpecError(f"curve x-coordinates must increase: {px} then {x}")
        merged.append((x, y))
    if len(merged) < 2:
        raise SpecError("curve gauge requires at least two distinct points")
    if abs(merged[0][0]) > _VERTEX_MERGE_TOL or abs(merged[0][1] - 1.0) > _VERTEX_MERGE_TOL:
        raise SpecError(f"curve must start at (0, 1), got {merged[0]}")
    merged[0] = (0.0, 1.0)
    if abs(merged[-1][0] - 1.0) > _VERTEX_MERGE_TOL:
        raise SpecError(f"curve must end at x = 1, got x = {merged[-1][0]}")
    merged[-1] = (1.0, merged[-1][1])
    prev_slope = None
    for i in range(len(merged) - 1):
        (x0, y0), (x1, y1) = merged[i], merged[i + 1]
        if not (0.0 <= y1 <= 1.0) or not (0.0 <= y0 <= 1.0):
            raise SpecError(f"curve heights must lie in [0, 1]: {merged[i]}, {merged[i + 1]}")
        if y1 > y0 + _VERTEX_MERGE_TOL:
            raise SpecError(f"curve heights must be nonincreasing: {merged[i]} then {merged[i + 1]}")
        slope = (y1 - y0) / (x1 - x0)
        if prev_slope is not None and slope > prev_slope + _SLOPE_TOL:
            raise SpecError(
                "curve is not concave at the triple "
                f"{merged[i - 1]}, {merged[i]}, {merged[i + 1]}"
            )
        prev_slope = slope
    return tuple(merged)


# ---------------------------------------------------------------------------
# analytic boundary data


def _p_boundary(p):
    if math.isinf(p):
        def sup_curve(x):
            if abs(x) > 1.0:
                raise DomainError(f"|x| must be <= 1, got {x}")
            return (1.0, 0.0, 0.0)

        return sup_curve

    if p == 1.0:
        def taxicab_curve(x):
            if abs(x) > 1.0:
                raise DomainError(f"|x| must be <= 1, got {x}")
            if x > 0.0:
                return (1.0 - x, -1.0, -1.0)
            if x < 0.0:
                return (1.0 + x, 1.0, 1.0)
            return (1.0, -1.0, 1.0)

        return taxicab_curve

    def p_curve(x):
        if abs(x) > 1.0:
            raise DomainError(f"|x| must be <= 1, got {x}")
        u = abs(x)
        if u == 1.0:
            return (0.0, -math.inf, -math.inf)
        f = (1.0 - u**p) ** (1.0 / p)
        d = -math.copysign(1.0, x) * u ** (p - 1.0) * (1.0 - u**p) ** (1.0 / p - 1.0)
        return (f, d, d)

    return p_curve


def _curve_boundary(points):
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    slopes = [
        (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(points) - 1)
    ]

    def interpolant(x):
        if abs(x) > 1.0:
            raise DomainError(f"|x| must be <= 1, got {x}")
        u = abs(x)
        lo, hi = 0, len(xs) - 1
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            if xs[mid] <= u:
                lo = mid
            else:
                hi = mid
        f = ys[lo] + slopes[lo] * (u - xs[lo])
        # one-sided slopes of the even extension at +-x
        right = slopes[lo]
        left = slopes[lo - 1] if (u == xs[lo] and lo > 0) else slopes[lo]
        if u == 1.0:
            right = left
        if x > 0.0:
            return (f, right, left)
        if x < 0.0:
            return (f, -left, -right)
        return (f, slopes[0], -slopes[0])

    return interpolant


def boundary_function(spec: NormSpec):
    """Curve evaluator x -> height, analytic when available, else bisection."""
    analytic = spec.analytic_boundary
    if analytic is not None:
        return lambda x: analytic(x)[0]
    kernel = spec.plan.kernel

    def numeric(x):
        lo, hi = kernel.boundary_bracket(x)
        if math.isnan(lo):
            raise DomainError(f"|x| must be <= 1, got {x}")
        return 0.5 * (lo + hi)

    return numeric


# ---------------------------------------------------------------------------
# plan compilation


class Plan:
    """Flattened spec tree handed to the kernel backend."""

    __slots__ = ("arrays", "_kernel")

    def __init__(self, arrays):
        self.arrays = arrays
        self._kernel = None

    @property
    def kernel(self):
        if self._kernel is None:
            self._kernel = Kernel(*self.arrays)
        return self._kernel


_plan_cache: dict = {}


def _plan_for(spec: NormSpec) -> Plan:
    key = spec
    plan = _plan_cache.get(key)
    if plan is None:
        plan = _compile(spec)
        _plan_cache[key] = plan
    return plan


def _compile(spec: NormSpec) -> Plan:
    kind, param, c0, c1, voff, vcnt, soff = [], [], [], [], [], [], []
    vx, vy, vslope = [], [], []

    def walk(s):
        if s.kind == "p":
            kind.append(1 if math.isinf(s.p) else 0)
            param.append(0.0 if math.isinf(s.p) else s.p)
            c0.append(-1)
            c1.append(-1)
            voff.append(0)
            vcnt.append(0)
            soff.append(0)
        elif s.kind == "mix":
            il = walk(s.left)
            ir = walk(s.right)
            kind.append(2)
            param.append(s.lam)
            c0.append(il)
            c1.append(ir)
            voff.append(0)
            vcnt.append(0)
            soff.append(0)
        else:
            pts = s.points
            kind.append(3)
            param.append(0.0)
            c0.append(-1)
            c1.append(-1)
            voff.append(len(vx))
            vcnt.append(len(pts))
            soff.append(len(vslope))
            for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
                vslope.append((y1 - y0) / (x1 - x0))
            vx.extend(x for x, _ in pts)
            vy.extend(y for _, y in pts)
        return len(kind) - 1

    walk(spec)
    if len(kind) > 64:
        raise SpecError(f"spec flattens to {len(kind)} nodes; at most 64 are supported")
    arrays = (
        np.asarray(kind, dtype=np.int8),
        np.asarray(param, dtype=np.float64),
        np.asarray(c0, dtype=np.int32),
        np.asarray(c1, dtype=np.int32),
        np.asarray(voff, dtype=np.int32),
        np.asarray(vcnt, dtype=np.int32),
        np.asarray(soff, dtype=np.int32),
        np.asarray(vx, dtype=np.float64),
        np.asarray(vy, dtype=np.float64),
        np.asarray(vslope, dtype=np.float64),
    )
    return Plan(arrays)


# ---------------------------------------------------------------------------
# evaluation and validation


def eval_norm(spec: NormSpec, v) -> float:
    """Value of the norm at the point v = (a, b)."""
    a, b = v
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"norm input must be finite, got {v!r}")
    return spec.plan.kernel.eval(a, b)


def eval_norm_many(spec: NormSpec, a, b) -> np.ndarray:
    """Vectorized :func:`eval_norm` over parallel coordinate arrays."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DomainError("coordinate arrays must have matching shapes")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DomainError("norm input must be finite")
    out = np.empty(a.shape, dtype=np.float64)
    spec.plan.kernel.eval_batch(a.ravel(), b.ravel(), out.ravel())
    return out


def swap_spec(spec: NormSpec) -> NormSpec:
    """The norm with swapped coordinates: (a, b) -> original norm of (b, a).

    p-norms are symmetric; mixtures swap componentwise; a curve gauge becomes
    the gauge of the reflected region, whose profile is the generalized
    inverse of the original profile.
    """
    if spec.kind == "p":
        return spec
    if spec.kind == "mix":
        return NormSpec.mixture(spec.lam, swap_spec(spec.left), swap_spec(spec.right))
    pts = spec.points
    out = []
    f1 = pts[-1][1]
    if f1 > 0.0:
        out.append((0.0, 1.0))
        out.append((f1, 1.0))
    for x, y in reversed(pts):
        out.append((y, x))
    # collapse equal first coordinates, keeping the highest second coordinate
    collapsed = []
    for x, y in out:
        if collapsed and abs(x - collapsed[-1][0]) <= _VERTEX_MERGE_TOL:
            if y > collapsed[-1][1]:
                collapsed[-1] = (collapsed[-1][0], y)
            continue
        collapsed.append((x, y))
    return NormSpec.curve_gauge(collapsed)


def is_polygonal(spec: NormSpec) -> bool:
    """True when the unit ball is known to be a polygon (flat boundary pieces)."""
    if spec.kind == "p":
        return spec.p == 1.0 or math.isinf(spec.p)
    if spec.kind == "mix":
        return is_polygonal(spec.left) and is_polygonal(spec.right)
    return True


@dataclass(frozen=True)
class Functional:
    """A linear functional (a, b) -> A*a + B*b on the plane."""

    A: float
    B: float

    def __post_init__(self):
        if not (math.isfinite(self.A) and math.isfinite(self.B)):
            raise SpecError(f"functional components must be finite, got {(self.A, self.B)}")

    def __call__(self, a: float, b: float) -> float:
        return self.A * a + self.B * b


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple
    seed: int
    sample_count: int
    label: str

    def to_json_dict(self):
        return {
            "label": self.label,
            "passed": self.passed,
            "seed": self.seed,
            "sample_count": self.sample_count,
            "violations": [
                {"property": name, "witness": witness, "magnitude": magnitude}
                for name, witness, magnitude in self.violations
            ],
        }


def validate_norm(spec: NormSpec, sample_count: int = 10_000, seed: int = 0) -> ValidationReport:
    """Check the defining properties of an absolute normalized norm by sampling.

    Properties checked on seeded pseudorandom points plus fixed corner cases:
    sign invariance, normalization on the axes, triangle inequality, absolute
    homogeneity, the sup/taxicab sandwich, monotonicity under componentwise
    domination, and strict monotonicity under strictly dominated pairs.
    Failures are reported, never raised.
    """
    if sample_count < 1:
        raise DomainError("sample_count must be >= 1")
    rng = np.random.default_rng(seed)
    violations = []
    tol = 1e-12

    n = int(sample_count)
    scale = 10.0 ** rng.uniform(-3.0, 3.0, size=n)
    pts = rng.uniform(-1.0, 1.0, size=(n, 2)) * scale[:, None]
    fixed = np.array(
        [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [1.0, 1.0], [-1.0, 1.0],
         [1e-9, 1e-9], [1e-9, 0.0], [0.5, 0.5]]
    )
    pts = np.vstack([fixed, pts])
    a, b = pts[:, 0].copy(), pts[:, 1].copy()

    norm = lambda xx, yy: eval_norm_many(spec, xx, yy)

    base = norm(a, b)

    def record(name, mask, magnitude):
        if np.any(mask):
            idx = int(np.argmax(np.where(mask, magnitude, -np.inf)))
            violations.append(
                (name, (float(a[idx]), float(b[idx])), float(magnitude[idx]))
            )

    # sign invariance
    for sa, sb in ((-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)):
        flipped = norm(sa * a, sb * b)
        diff = np.abs(flipped - base)
        record(f"absolute({sa:+.0f},{sb:+.0f})", diff > tol, diff)

    # normalization
    for unit in ((1.0, 0.0), (0.0, 1.0)):
        err = abs(eval_norm(spec, unit) - 1.0)
        if err > tol:
            violations.append(("normalised", unit, err))

    # triangle inequality on consecutive sample pairs
    a2, b2 = np.roll(a, 1), np.roll(b, 1)
    lhs = norm(a + a2, b + b2)
    rhs = base + norm(a2, b2)
    diff = lhs - rhs
    record("triangle", diff > tol, diff)

    # homogeneity, relative tolerance
    lam = 10.0 ** rng.uniform(-3.0, 3.0, size=a.shape[0])
    scaled = norm(lam * a, lam * b)
    expect = lam * base
    diff = np.abs(scaled - expect) / np.maximum(expect, 1e-300)
    record("homogeneous", (diff > tol) & (expect > 0), diff)

    # sandwich between sup and taxicab norms
    supn = np.maximum(np.abs(a), np.abs(b))
    taxi = np.abs(a) + np.abs(b)
    low = supn - base
    high = base - taxi
    record("sandwich-low", low > tol * np.maximum(supn, 1.0), low)
    record("sandwich-high", high > tol * np.maximum(taxi, 1.0), high)

    # monotone under componentwise domination
    shrink = rng.uniform(0.0, 1.0, size=(a.shape[0], 2))
    dom = norm(np.abs(a) * shrink[:, 0], np.abs(b) * shrink[:, 1])
    diff = dom - base
    record("monotone", diff > tol, diff)

    # strictly monotone under strict domination (margin 0.01, unit-box samples)
    box = rng.uniform(-1.0, 1.0, size=(min(n, 2000), 2))
    ua, ub = np.abs(box[:, 0]), np.abs(box[:, 1])
    small = norm(ua, ub)
    big = norm(ua + 0.01, ub + 0.01)
    gap = big - small
    if np.any(gap <= 0.0):
        idx = int(np.argmin(gap))
        violations.append(
            ("strictly-monotone", (float(ua[idx]), float(ub[idx])), float(gap[idx]))
        )

    return ValidationReport(
        passed=not violations,
        violations=tuple(violations),
        seed=seed,
        sample_count=sample_count,
        label=spec.label,
    )


# ---------------------------------------------------------------------------
# dual norm


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def dual_norm(spec: NormSpec, g: Functional, grid: int = 129) -> float:
    """Norm of the functional g in the dual space.

    Equals the maximum of |A x + B y| over the unit sphere, evaluated in the
    quadrant form max over x in [0, 1] of |A| x + |B| f(x) with f the upper
    boundary curve; that objective is concave, so a grid scan plus
    golden-section refinement of the best cell is within 1e-8 of the truth.
    """
    if grid < 3:
        raise DomainError("grid must be >= 3")
    A, B = abs(g.A), abs(g.B)
    if A == 0.0 and B == 0.0:
        return 0.0
    f = boundary_function(spec)

    def h(x):
        return A * x + B * f(x)

    xs = np.linspace(0.0, 1.0, grid)
    vals = [h(x) for x in xs]
    k = int(np.argmax(vals))
    best = vals[k]
    lo = xs[max(k - 1, 0)]
    hi = xs[min(k + 1, grid - 1)]
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = h(x1), h(x2)
    for _ in range(80):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = h(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = h(x1)
        if hi - lo < 1e-13:
            break
    return max(best, f1, f2)


# ---------------------------------------------------------------------------
# mini-language


def parse_spec(text: str) -> NormSpec:
    """Parse the norm mini-language.

    Grammar (whitespace-free): ``p:<float|inf>``, ``mix:<w>:<spec>:<spec>``,
    ``curve:x1,y1;x2,y2;...``.
    """
    if not isinstance(text, str) or not text:
        raise SpecParseError("empty spec", 0, text or "")
    tokens = text.split(":")
    offsets = []
    pos = 0
    for tok in tokens:
        offsets.append(pos)
        pos += len(tok) + 1

    def fail(msg, idx):
        where = offsets[idx] if idx < len(offsets) else len(text)
        raise SpecParseError(msg, where, text)

    def number(idx, what):
        if idx >= len(tokens):
            fail(f"missing {what}", idx)
        tok = tokens[idx]
        if tok == "inf":
            return math.inf
        try:
            return float(tok)
        except ValueError:
            fail(f"invalid {what} {tok!r}", idx)

    def parse_at(idx):
        if idx >= len(tokens):
            fail("missing spec", idx)
        head = tokens[idx]
        if head == "p":
            value = number(idx + 1, "p-norm exponent")
            try:
                return NormSpec.p_norm(value), idx + 2
            except SpecError as exc:
                fail(str(exc), idx + 1)
        if head == "mix":
            lam = number(idx + 1, "mixture weight")
            if not 0.0 <= lam <= 1.0:
                fail(f"mixture weight must lie in [0, 1], got {lam}", idx + 1)
            left, nxt = parse_at(idx + 2)
            right, nxt = parse_at(nxt)
            return NormSpec.mixture(lam, left, right), nxt
        if head == "curve":
            if idx + 1 >= len(tokens):
                fail("missing curve points", idx + 1)
            pts = []
            for pair in tokens[idx + 1].split(";"):
                coords = pair.split(",")
                if len(coords) != 2:
                    fail(f"curve point {pair!r} must be x,y", idx + 1)
                try:
                    pts.append((float(coords[0]), float(coords[1])))
                except ValueError:
                    fail(f"invalid curve coordinate in {pair!r}", idx + 1)
            try:
                return NormSpec.curve_gauge(pts), idx + 2
            except SpecError as exc:
                fail(str(exc), idx + 1)
        fail(f"unknown kind tag {head!r}", idx)

    spec, nxt = parse_at(0)
    if nxt != len(tokens):
        fail(f"unexpected trailing text {':'.join(tokens[nxt:])!r}", nxt)
    return spec


def _fmt_num(v: float) -> str:
    if math.isinf(v):
        return "inf"
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def format_spec(spec: NormSpec) -> str:
    """Mini-language text for a spec; inverse of :func:`parse_spec`."""
    if spec.kind == "p":
        return f"p:{_fmt_num(spec.p)}"
    if spec.kind == "mix":
        return f"mix:{_fmt_num(spec.lam)}:{format_spec(spec.left)}:{format_spec(spec.right)}"
    pts = ";".join(f"{_fmt_num(x)},{_fmt_num(y)}" for x, y in spec.points)
    return f"curve:{pts}"
