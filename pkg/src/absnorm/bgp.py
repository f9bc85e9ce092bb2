"""Direct sums of normed spaces and preservation of ball generation.

A two-component sum normed by an absolute normalized norm keeps the
ball-generated property of its components when the combining norm is smooth
at both basis points; smoothness at a basis point is in turn equivalent to a
tail-slimness condition on the norm ("norm of (1, s - eps) < s eventually").
This module checks the condition with explicit witnesses, cross-validates it
against the smoothness verdicts, evaluates sum norms on finite-dimensional
components, and verifies the metric inclusions behind the convergence lemma
by seeded sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DomainError, PreconditionError, SpecError
from .normspec import NormSpec, ValidationReport, eval_norm, eval_norm_many, swap_spec
from .support import gateaux_at

__all__ = [
    "FiniteSpace",
    "ConditionWitness",
    "CrosscheckReport",
    "InclusionReport",
    "BgpVerdict",
    "DEFAULT_EPSILONS",
    "lp_space",
    "space_from_spec",
    "sum_space",
    "validate_space",
    "check_condition",
    "aggregate_condition",
    "smooth_at_basis",
    "equivalence_crosscheck",
    "sum_norm",
    "lemma_inclusion_verify",
    "bgp_sum_verdict",
    "witness_margins_csv",
]

DEFAULT_EPSILONS = (0.015625, 0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 8.0)

_MAX_SUM_DEPTH = 4


# ---------------------------------------------------------------------------
# finite-dimensional component spaces


@dataclass(frozen=True)
class FiniteSpace:
    """A finite-dimensional normed space given by norm evaluators.

    ``norm`` maps one vector to its norm, ``norm_batch`` maps an (n, dim)
    array to n norms; ``depth`` counts nested sum constructions (capped so
    that desk experiments stay tractable).
    """

    dim: int
    norm: callable
    norm_batch: callable
    label: str
    depth: int = 0


def lp_space(p: float, dim: int) -> FiniteSpace:
    """The p-norm on dim coordinates, p in [1, inf]."""
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise SpecError(f"p-norm exponent must be >= 1, got {p}")
    if dim < 1:
        raise SpecError(f"dimension must be >= 1, got {dim}")

    if math.isinf(p):
        def norm(v):
            return float(np.max(np.abs(np.atleast_1d(v))))

        def norm_batch(m):
            return np.max(np.abs(m), axis=1)

        tag = "inf"
    elif p == 1.0:
        def norm(v):
            return float(np.sum(np.abs(np.atleast_1d(v))))

        def norm_batch(m):
            return np.sum(np.abs(m), axis=1)

        tag = "1"
    else:
        def norm(v):
            v = np.abs(np.atleast_1d(v)).astype(float)
            m = v.max()
            if m == 0.0:
                return 0.0
            return float(m * np.sum((v / m) ** p) ** (1.0 / p))

        def norm_batch(mtx):
            a = np.abs(mtx)
            m = a.max(axis=1)
            safe = np.where(m > 0.0, m, 1.0)
            return np.where(m > 0.0, m * np.sum((a / safe[:, None]) ** p, axis=1) ** (1.0 / p), 0.0)

        tag = f"{p:g}"
    return FiniteSpace(dim=int(dim), norm=norm, norm_batch=norm_batch, label=f"l{tag}(R^{dim})")


def space_from_spec(spec: NormSpec) -> FiniteSpace:
    """The plane normed by an arbitrary spec, as a component space."""
    kernel = spec.plan.kernel

    def norm(v):
        v = np.atleast_1d(v)
        return float(kernel.eval(float(v[0]), float(v[1])))

    def norm_batch(m):
        m = np.ascontiguousarray(m, dtype=np.float64)
        out = np.empty(m.shape[0])
        kernel.eval_batch(np.ascontiguousarray(m[:, 0]), np.ascontiguousarray(m[:, 1]), out)
        return out

    return FiniteSpace(dim=2, norm=norm, norm_batch=norm_batch, label=spec.label)


def sum_space(E: NormSpec, X: FiniteSpace, Y: FiniteSpace, label: str = "") -> FiniteSpace:
    """The sum of X and Y combined by E, itself usable as a component."""
    depth = 1 + max(X.depth, Y.depth)
    if depth > _MAX_SUM_DEPTH:
        raise SpecError(f"sum nesting deeper than {_MAX_SUM_DEPTH} is not supported")
    dx = X.dim
    kernel = E.plan.kernel

    def norm(v):
        v = np.atleast_1d(v)
        return float(kernel.eval(X.norm(v[:dx]), Y.norm(v[dx:])))

    def norm_batch(m):
        a = np.ascontiguousarray(X.norm_batch(m[:, :dx]), dtype=np.float64)
        b = np.ascontiguousarray(Y.norm_batch(m[:, dx:]), dtype=np.float64)
        out = np.empty(m.shape[0])
        kernel.eval_batch(a, b, out)
        return out

    return FiniteSpace(
        dim=X.dim + Y.dim,
        norm=norm,
        norm_batch=norm_batch,
        label=label or f"sum[{E.label}]({X.label}, {Y.label})",
        depth=depth,
    )


def validate_space(space: FiniteSpace, sample_count: int = 2000, seed: int = 0) -> ValidationReport:
    """Sampled homogeneity and triangle-inequality check for a component space."""
    rng = np.random.default_rng(seed)
    n = int(sample_count)
    pts = rng.uniform(-1.0, 1.0, size=(n, space.dim))
    lam = 10.0 ** rng.uniform(-2.0, 2.0, size=n)
    base = space.norm_batch(pts)
    violations = []

    scaled = space.norm_batch(pts * lam[:, None])
    rel = np.abs(scaled - lam * base) / np.maximum(lam * base, 1e-300)
    bad = (rel > 1e-10) & (base > 0)
    if np.any(bad):
        i = int(np.argmax(np.where(bad, rel, -np.inf)))
        violations.append(("homogeneous", tuple(pts[i].tolist()), float(rel[i])))

    other = np.roll(pts, 1, axis=0)
    lhs = space.norm_batch(pts + other)
    rhs = base + space.norm_batch(other)
    gap = lhs - rhs
    if np.any(gap > 1e-10):
        i = int(np.argmax(gap))
        violations.append(("triangle", tuple(pts[i].tolist()), float(gap[i])))

    return ValidationReport(
        passed=not violations,
        violations=tuple(violations),
        seed=seed,
        sample_count=sample_count,
        label=space.label,
    )


# ---------------------------------------------------------------------------
# tail-slimness condition


@dataclass(frozen=True)
class ConditionWitness:
    """Per-epsilon evidence for the tail condition "norm(1, s - eps) < s".

    ``holds`` is yes when margins are positive and nondecreasing from s0 to
    the end of the grid, no when margins stay nonpositive and bounded away
    from zero, undecided otherwise.
    """

    coordinate: str
    epsilon: float
    s0: Optional[float]
    s_samples: np.ndarray
    margins: np.ndarray
    holds: str

    def to_json_dict(self, include_samples: bool = True):
        out = {
            "coordinate": self.coordinate,
            "epsilon": self.epsilon,
            "s0": self.s0,
            "holds": self.holds,
        }
        if include_samples:
            out["s_samples"] = [float(v) for v in self.s_samples]
            out["margins"] = [float(v) for v in self.margins]
        return out


def check_condition(
    spec: NormSpec,
    coordinate: str,
    epsilons: Sequence[float],
    s_max: Optional[float] = None,
    grid: int = 512,
    tol: Tolerances = DEFAULT_TOL,
):
    """Witnesses for the tail condition, one per epsilon.

    For each epsilon the margin s - norm(1, s - eps) (or the swapped form for
    the second coordinate) is sampled on a geometric grid; the witness
    records the smallest grid point from which all margins are positive with
    a nondecreasing tail.  When no ``s_max`` is given the window starts at
    64*(1+eps) and is widened geometrically as long as every margin is
    nonpositive but still improving at the far end, since a "no" is sound
    only once the tail has stopped rising (gently smooth norms cross zero
    very late); an explicit ``s_max`` disables the widening.
    """
    if coordinate not in ("first", "second"):
        raise DomainError(f"coordinate must be 'first' or 'second', got {coordinate!r}")
    if grid < 8:
        raise DomainError("grid must be >= 8")
    witnesses = []
    for eps in epsilons:
        eps = float(eps)
        if eps <= 0.0:
            raise DomainError(f"epsilon must be positive, got {eps}")
        adaptive = s_max is None
        top = s_max if s_max is not None else 64.0 * (1.0 + eps)
        lo = eps + 2.0**-10
        if top <= lo:
            raise DomainError(f"s_max must exceed {lo}, got {top}")
        cap = 2.0**16 * top
        while True:
            s = np.geomspace(lo, top, grid)
            arg = s - eps
            ones = np.ones(grid)
            if coordinate == "first":
                vals = eval_norm_many(spec, ones, arg)
            else:
                vals = eval_norm_many(spec, arg, ones)
            margins = s - vals

            nonpos = np.flatnonzero(margins <= 0.0)
            start = int(nonpos[-1]) + 1 if nonpos.size else 0
            if start < grid:
                tail = margins[start:]
                if tail.size < 2 or np.all(np.diff(tail) >= -1e-12):
                    holds = "yes"
                    s0 = float(s[start])
                else:
                    holds = "undecided"
                    s0 = float(s[start])
                break
            # every margin is nonpositive; a verdict "no" is only sound when
            # the tail has stopped improving, otherwise widen the window
            improving = margins[-1] - margins[3 * grid // 4] > tol.margin_floor
            if improving and adaptive and top < cap:
                top *= 8.0
                continue
            s0 = None
            if improving:
                holds = "undecided"
            else:
                holds = "no" if margins.max() <= -tol.margin_floor else "undecided"
            break
        witnesses.append(
            ConditionWitness(
                coordinate=coordinate,
                epsilon=eps,
                s0=s0,
                s_samples=s,
                margins=margins,
                holds=holds,
            )
        )
    return witnesses


def aggregate_condition(witnesses) -> str:
    """Combine per-epsilon verdicts: the condition quantifies over all epsilon."""
    verdicts = [w.holds for w in witnesses]
    if "no" in verdicts:
        return "no"
    if all(v == "yes" for v in verdicts):
        return "yes"
    return "undecided"


def witness_margins_csv(witnesses) -> str:
    lines = ["epsilon,s,margin"]
    for w in witnesses:
        for s, m in zip(w.s_samples, w.margins):
            lines.append(
                ",".join(format(v, ".17g") for v in (w.epsilon, float(s), float(m)))
            )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# smoothness at the basis points and the equivalence cross-check


def smooth_at_basis(spec: NormSpec, tol: Tolerances = DEFAULT_TOL) -> Tuple[str, str]:
    """Smoothness verdicts at (0, 1) and (1, 0).

    The second verdict is obtained by swapping the coordinates of the norm
    and asking at (0, 1) again.
    """
    at01 = gateaux_at(spec, 0.0, tol=tol).verdict
    at10 = gateaux_at(swap_spec(spec), 0.0, tol=tol).verdict
    return (at01, at10)


@dataclass(frozen=True)
class CrosscheckReport:
    consistent: str
    detail: dict

    def to_json_dict(self):
        return {"consistent": self.consistent, "detail": self.detail}


def equivalence_crosscheck(
    spec: NormSpec,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    s_max: Optional[float] = None,
    tol: Tolerances = DEFAULT_TOL,
) -> CrosscheckReport:
    """Cross-validate basis-point smoothness against the tail conditions.

    Smoothness at (0, 1) resp. (1, 0) is equivalent to the first resp. second
    tail condition, so decided verdicts must agree; a decided disagreement
    indicates a harness or spec failure.
    """
    at01, at10 = smooth_at_basis(spec, tol=tol)
    c1 = aggregate_condition(check_condition(spec, "first", epsilons, s_max=s_max, tol=tol))
    c2 = aggregate_condition(check_condition(spec, "second", epsilons, s_max=s_max, tol=tol))

    def agree(smooth_v, cond_v):
        if smooth_v == "undecided" or cond_v == "undecided":
            return None
        return (smooth_v == "smooth") == (cond_v == "yes")

    pair1 = agree(at01, c1)
    pair2 = agree(at10, c2)
    if pair1 is False or pair2 is False:
        consistent = "no"
    elif pair1 is True and pair2 is True:
        consistent = "yes"
    else:
        consistent = "undecided"
    return CrosscheckReport(
        consistent=consistent,
        detail={
            "first": {"smooth_01": at01, "condition_31": c1},
            "second": {"smooth_10": at10, "condition_32": c2},
        },
    )


# ---------------------------------------------------------------------------
# sum norms and the inclusion verification


def sum_norm(E: NormSpec, X: FiniteSpace, Y: FiniteSpace, x, y) -> float:
    """Norm of (x, y) in the E-combined sum of X and Y."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.size != X.dim or y.size != Y.dim:
        raise DomainError(
            f"component dimensions mismatch: got {x.size} and {y.size}, "
            f"expected {X.dim} and {Y.dim}"
        )
    return eval_norm(E, (X.norm(x), Y.norm(y)))


def _sample_ball(space: FiniteSpace, center, radius: float, count: int, rng,
                 chunk: int = 8192) -> np.ndarray:
    """Uniform points of the radius-ball around center, by rejection from the
    enclosing sup-norm box (acceptance is bounded below by the volume ratio,
    which the sup/taxicab sandwich keeps positive)."""
    out = np.empty((count, space.dim))
    got = 0
    while got < count:
        draw = rng.uniform(-radius, radius, size=(chunk, space.dim))
        acc = draw[space.norm_batch(draw) <= radius]
        take = min(count - got, acc.shape[0])
        out[got:got + take] = acc[:take] + center
        got += take
    return out


@dataclass(frozen=True)
class InclusionReport:
    """Sampled evidence for the lemma's ball containments.

    With eps = norm(y_center) - r and a scale s whose tail margin is
    positive, the checks are: (a) the r-ball around y_center sits inside the
    (s - eps)-ball around the scaled center; (b) the product of the unit ball
    and that ball sits inside the t-ball around (0, scaled center) in the
    sum, where t = norm of (1, s - eps); (c) the origin stays outside, since
    the scaled center has sum-norm s > t.
    """

    y_center: tuple
    r: float
    epsilon: float
    s: float
    t: float
    samples_checked: int
    violations: tuple
    zero_excluded: bool
    seed: int

    def to_json_dict(self):
        return {
            "y_center": list(self.y_center),
            "r": self.r,
            "epsilon": self.epsilon,
            "s": self.s,
            "t": self.t,
            "samples_checked": self.samples_checked,
            "violations": [
                {"index": i, "check": name, "excess": excess}
                for i, name, excess in self.violations
            ],
            "zero_excluded": self.zero_excluded,
            "seed": self.seed,
        }


def lemma_inclusion_verify(
    E: NormSpec,
    X: FiniteSpace,
    Y: FiniteSpace,
    y_center,
    r: float,
    sample_count: int = 100_000,
    seed: int = 0,
    s: Optional[float] = None,
    tol: Tolerances = DEFAULT_TOL,
) -> InclusionReport:
    """Verify the lemma's containments by seeded sampling.

    Requires the tail condition to hold for eps = norm(y_center) - r (else a
    precondition error naming eps).  ``s`` defaults to max(eps, norm(y)) +
    eps when that has positive margin, falling back to the witness grid; an
    explicit s is validated against the same constraints.  Sampling is
    chunked with a fixed chunk size, so results are reproducible for a given
    seed regardless of timing.
    """
    y_center = np.atleast_1d(np.asarray(y_center, dtype=float))
    if y_center.size != Y.dim:
        raise DomainError(f"y_center has dimension {y_center.size}, expected {Y.dim}")
    r = float(r)
    ny = Y.norm(y_center)
    if not (ny > r > 0.0):
        raise PreconditionError(f"need norm(y_center) > r > 0, got norm {ny} and r {r}")
    eps = ny - r

    witness = check_condition(E, "first", [eps], tol=tol)[0]
    if witness.holds != "yes":
        raise PreconditionError(
            f"tail condition fails for epsilon={eps} ({witness.holds}); "
            "the lemma's hypothesis is unavailable"
        )

    def margin_at(sv):
        return sv - eval_norm(E, (1.0, sv - eps))

    floor = max(eps, ny)
    if s is None:
        cand = floor + eps
        if cand >= witness.s0 and margin_at(cand) > 0.0:
            s = cand
        else:
            grid_ok = [
                float(sv)
                for sv, m in zip(witness.s_samples, witness.margins)
                if sv > floor and sv >= witness.s0 and m > 0.0
            ]
            if not grid_ok:
                raise PreconditionError(
                    f"no admissible scale above max(epsilon, norm(y)) = {floor}"
                )
            s = grid_ok[0]
    else:
        s = float(s)
        if s <= floor:
            raise PreconditionError(f"s must exceed max(epsilon, norm(y)) = {floor}")
        if margin_at(s) <= 0.0:
            raise PreconditionError(f"margin at s={s} is not positive")

    t = eval_norm(E, (1.0, s - eps))
    unit = y_center / ny
    center2 = s * unit
    slack = 1e-12
    n = int(sample_count)
    rng = np.random.default_rng(seed)
    violations = []

    # (a) the r-ball around y_center lies in the (s-eps)-ball around center2
    w = _sample_ball(Y, y_center, r, n, rng)
    d = Y.norm_batch(w - center2)
    bad = np.flatnonzero(d > (s - eps) + slack)
    for i in bad[:32]:
        violations.append((int(i), "radius", float(d[i] - (s - eps))))

    # (b) unit-ball x shifted-ball pairs lie in the t-ball around (0, center2)
    u = _sample_ball(X, np.zeros(X.dim), 1.0, n, rng)
    v = _sample_ball(Y, center2, s - eps, n, rng)
    ax = np.ascontiguousarray(X.norm_batch(u))
    by = np.ascontiguousarray(Y.norm_batch(v - center2))
    zn = eval_norm_many(E, ax, by)
    bad = np.flatnonzero(zn > t + slack)
    for i in bad[:32]:
        violations.append((int(i), "product", float(zn[i] - t)))

    # (c) the origin is excluded: the scaled center has sum-norm s > t
    zero_gap = eval_norm(E, (0.0, Y.norm(center2)))
    zero_excluded = bool(zero_gap > t + slack)

    return InclusionReport(
        y_center=tuple(float(c) for c in y_center),
        r=r,
        epsilon=float(eps),
        s=float(s),
        t=float(t),
        samples_checked=2 * n,
        violations=tuple(violations),
        zero_excluded=zero_excluded,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# preservation verdict


@dataclass(frozen=True)
class BgpVerdict:
    smooth_at_01: str
    smooth_at_10: str
    condition_31: str
    condition_32: str
    verdict: str
    notes: str

    def to_json_dict(self):
        return {
            "smooth_at_01": self.smooth_at_01,
            "smooth_at_10": self.smooth_at_10,
            "condition_31": self.condition_31,
            "condition_32": self.condition_32,
            "verdict": self.verdict,
            "notes": self.notes,
        }


def _is_taxicab(spec: NormSpec) -> bool:
    ts = np.linspace(0.0, 1.0, 17)
    a = 1.0 - ts
    b = ts
    vals = eval_norm_many(spec, a, b)
    return bool(np.max(np.abs(vals - (a + b))) <= 1e-9)


def bgp_sum_verdict(
    E: NormSpec,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    tol: Tolerances = DEFAULT_TOL,
) -> BgpVerdict:
    """Preservation verdict for sums combined by E.

    ``preserved`` exactly when the norm is smooth at both basis points; the
    tail-condition verdicts are attached as corroboration.  For the taxicab
    norm the verdict is unknown and the notes record that two-component
    preservation under that sum is an open question.
    """
    at01, at10 = smooth_at_basis(E, tol=tol)
    c31 = aggregate_condition(check_condition(E, "first", epsilons, tol=tol))
    c32 = aggregate_condition(check_condition(E, "second", epsilons, tol=tol))
    preserved = at01 == "smooth" and at10 == "smooth"
    verdict = "preserved" if preserved else "unknown"
    if preserved:
        notes = (
            "smooth at (0,1) and (1,0): a sum of two spaces with the "
            "ball-generated property keeps it under this norm"
        )
    else:
        notes = "smoothness at a basis point is not established; no preservation claim"
    if _is_taxicab(E):
        notes += (
            "; the spec is numerically the taxicab norm, for which two-component "
            "preservation is an open question"
        )
    return BgpVerdict(
        smooth_at_01=at01,
        smooth_at_10=at10,
        condition_31=c31,
        condition_32=c32,
        verdict=verdict,
        notes=notes,
    )
