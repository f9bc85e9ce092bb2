"""Acceptance checklist: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; tolerances and budgets are fixed here, not calibrated elsewhere.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

import absnorm as an
from conftest import (
    HEX_KINK_POINTS,
    make_curve_specs,
    make_mixture_specs,
    make_p_specs,
    p_boundary_oracle,
)

P_SPECS = make_p_specs()
MIX_SPECS = make_mixture_specs()
CURVE_SPECS = make_curve_specs()
ZOO = list(P_SPECS.values()) + list(MIX_SPECS.values()) + list(CURVE_SPECS.values())
CURVE_LABELS = {spec.label for spec in CURVE_SPECS.values()}

# 41 interior points, axis excluded: at x = 0 the norms with exponent in
# (1, 2) expand like 1 + h*dy + |h*dx|**p along the probe, so a step of 1e-7
# resolves the derivative only to ~2e-4 there regardless of implementation
INTERIOR_41 = np.linspace(-0.946, 0.954, 41)
DIRECTIONS_16 = [
    (math.cos(2 * math.pi * k / 16), math.sin(2 * math.pi * k / 16)) for k in range(16)
]


def _report(line, ok):
    print(f"[{'PASS' if ok else 'FAIL'}] {line}")
    return ok


# ---------------------------------------------------------------------------
# criterion 1: boundary oracle


def test_criterion_1_boundary_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for p, spec in P_SPECS.items():
        xs = np.linspace(-1.0, 1.0, 201)
        if math.isinf(p):
            xs = xs[1:-1]
        for x in xs:
            err = abs(an.boundary_value(spec, float(x)) - p_boundary_oracle(p, x))
            worst = max(worst, err)
        stripped = spec.without_analytic()
        for x in xs[np.abs(xs) < 1.0]:
            err = abs(an.boundary_value(stripped, float(x)) - p_boundary_oracle(p, x))
            worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 2.0
    assert _report(
        f"criterion 1: boundary oracle, max err {worst:.2e}, {elapsed:.2f}s", ok
    )


# ---------------------------------------------------------------------------
# criterion 2: support-functional certificates


def test_criterion_2_support_certificates():
    t0 = time.perf_counter()
    worst_dual = 0.0
    worst_attain = 0.0
    worst_map = 0.0
    for spec in ZOO:
        for x0 in INTERIOR_41:
            x0 = float(x0)
            ss = an.support_set_interior(spec, x0)
            f0 = an.boundary_value(spec, x0)
            for g in ss.functionals:
                worst_dual = max(worst_dual, abs(an.dual_norm(spec, g) - 1.0))
                worst_attain = max(worst_attain, abs(g(x0, f0) - 1.0))
    for p in (1.5, 2.0, 3.0, 4.0):
        spec = P_SPECS[p]
        for x0 in INTERIOR_41:
            x0 = float(x0)
            y0 = p_boundary_oracle(p, x0)
            (g,) = an.support_set_interior(spec, x0).functionals
            expect_a = math.copysign(abs(x0) ** (p - 1), x0)
            expect_b = y0 ** (p - 1)
            worst_map = max(worst_map, abs(g.A - expect_a), abs(g.B - expect_b))
    elapsed = time.perf_counter() - t0
    ok = worst_dual <= 1e-8 and worst_attain <= 1e-8 and worst_map <= 1e-6 and elapsed < 30.0
    assert _report(
        "criterion 2: support certificates, "
        f"dual err {worst_dual:.2e}, attain err {worst_attain:.2e}, "
        f"dual-map err {worst_map:.2e}, {elapsed:.1f}s",
        ok,
    )


# ---------------------------------------------------------------------------
# criterion 3: derivative functional vs finite differences


def test_criterion_3_finite_difference_agreement():
    worst = 0.0
    checked = 0
    for spec in ZOO:
        for x0 in INTERIOR_41:
            verdict = an.gateaux_at(spec, float(x0))
            if verdict.verdict != "smooth":
                continue
            point = verdict.point
            g = verdict.derivative
            for d in DIRECTIONS_16:
                probe = an.directional_derivative_probe(spec, point, d, 1e-7)
                worst = max(worst, abs(g(*d) - probe))
                checked += 1
    ok = worst <= 1e-4 and checked > 0
    assert _report(
        f"criterion 3: finite-difference agreement over {checked} probes, "
        f"max err {worst:.2e}",
        ok,
    )


# ---------------------------------------------------------------------------
# criterion 4: endpoint case classification


def test_criterion_4_endpoint_cases_p_norms():
    ss = an.support_set_endpoint(P_SPECS[math.inf], "right")
    ok = ss.case_label == "ii"
    for p in (1.5, 2.0, 3.0):
        ss = an.support_set_endpoint(P_SPECS[p], "right")
        ok = ok and ss.case_label == "iii"
        ok = ok and [(g.A, g.B) for g in ss.functionals] == [(1.0, 0.0)]
    ss = an.support_set_endpoint(P_SPECS[1.0], "right", samples=33)
    ok = ok and ss.case_label == "v"
    ok = ok and abs(ss.parameters["a"] + 1.0) <= 1e-6
    bs = [g.B for g in ss.functionals]
    ok = ok and max(map(abs, bs)) <= 1.0 + 1e-9 and max(bs) > 0.99 and min(bs) < -0.99
    assert _report("criterion 4: endpoint cases for the p-norm family", ok)


def test_criterion_4_endpoint_case_hexagonal_gauge():
    spec = an.gauge_from_curve(HEX_KINK_POINTS)
    ss = an.support_set_endpoint(spec, "right")
    a_ok = abs(ss.parameters["a"] + 1.8) <= 1e-6
    case_ok = ss.case_label == "iv"
    _report(
        f"criterion 4: hexagonal gauge endpoint, case {ss.case_label} "
        f"(expected iv), a = {ss.parameters['a']}",
        a_ok and case_ok,
    )
    assert a_ok
    assert case_ok


# ---------------------------------------------------------------------------
# criterion 5: smoothness vs tail-condition equivalence


def test_criterion_5_equivalence_harness():
    ok = True
    for spec in ZOO:
        report = an.equivalence_crosscheck(spec)
        if report.consistent == "no":
            ok = False
        elif report.consistent == "undecided" and spec.label not in CURVE_LABELS:
            ok = False
    assert _report("criterion 5: smoothness/condition equivalence on the zoo", ok)


# ---------------------------------------------------------------------------
# criterion 6: lemma inclusions


def test_criterion_6_lemma_inclusions():
    t0 = time.perf_counter()
    R = an.lp_space(2, 1)
    hand = an.lemma_inclusion_verify(
        P_SPECS[2.0], R, R, [2.0], 1.0, sample_count=100_000, seed=7, s=3.0
    )
    ok = (
        hand.epsilon == pytest.approx(1.0, abs=1e-12)
        and hand.t == pytest.approx(math.sqrt(5.0), abs=1e-12)
        and not hand.violations
        and hand.zero_excluded
    )

    smooth_pool = [P_SPECS[1.5], P_SPECS[2.0], P_SPECS[3.0], P_SPECS[4.0],
                   P_SPECS[math.inf], CURVE_SPECS["hex_flat"]]
    spaces = [an.lp_space(1, 2), an.lp_space(2, 2), an.lp_space(math.inf, 2),
              an.lp_space(2, 3), an.lp_space(1.5, 2), an.lp_space(2, 1)]
    rng = np.random.default_rng(20_240)
    for k in range(8):
        E = smooth_pool[int(rng.integers(len(smooth_pool)))]
        X = spaces[int(rng.integers(len(spaces)))]
        Y = spaces[int(rng.integers(len(spaces)))]
        direction = rng.normal(size=Y.dim)
        direction /= Y.norm(direction)
        scale = float(rng.uniform(1.2, 2.5))
        y_center = scale * direction
        r = float(rng.uniform(0.3, 0.7)) * scale
        rep = an.lemma_inclusion_verify(
            E, X, Y, y_center, r, sample_count=100_000, seed=1000 + k
        )
        ok = ok and not rep.violations and rep.zero_excluded
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60.0
    assert _report(
        f"criterion 6: lemma inclusions, 9 instances x 1e5 samples, {elapsed:.1f}s", ok
    )


# ---------------------------------------------------------------------------
# criterion 7: mean-value certification


def _random_concave_curve(rng):
    xm = float(rng.uniform(0.2, 0.8))
    slope1 = -float(rng.uniform(0.0, 1.0))
    ym = 1.0 + slope1 * xm
    slope2 = slope1 - float(rng.uniform(0.05, 2.0))
    y1 = max(0.0, ym + slope2 * (1.0 - xm))
    return an.gauge_from_curve([(0.0, 1.0), (xm, ym), (1.0, y1)])


def test_criterion_7_mean_value_property():
    rng = np.random.default_rng(771)
    failures = 0
    for k in range(100):
        kind = k % 3
        if kind == 0:
            spec = ZOO[int(rng.integers(len(ZOO)))]
        elif kind == 1:
            lam = float(rng.uniform(0.05, 0.95))
            p_left = float(rng.uniform(1.0, 4.0))
            spec = an.NormSpec.mixture(
                lam, an.NormSpec.p_norm(p_left), an.NormSpec.p_norm(math.inf)
            )
        else:
            spec = _random_concave_curve(rng)
        a = float(rng.uniform(-0.96, 0.8))
        b = float(rng.uniform(a + 0.1, 0.96))
        if not an.mvt_check(spec, a, b, 51):
            failures += 1
    assert _report(f"criterion 7: mean-value certification, {failures} failures", failures == 0)


# ---------------------------------------------------------------------------
# criterion 8: classification table


def test_criterion_8_classification_table():
    expected = {
        "p:2": ("yes", "yes"),
        "p:1": ("no", "yes"),
        "p:inf": ("no", "no"),
        "mix:0.5:p:1:p:inf": ("no", "yes"),
    }
    ok = True
    for text, (convex, monotone) in expected.items():
        rep = an.classify_convexity(an.parse_spec(text))
        if (rep.strictly_convex, rep.strictly_monotone) != (convex, monotone):
            ok = False
    assert _report("criterion 8: strict convexity/monotonicity table", ok)


# ---------------------------------------------------------------------------
# criterion 9: CLI determinism


CLI_CASES = [
    ("eval", "--norm", "p:2", "--point", "0.6,0.8"),
    ("psi", "--norm", "p:2", "--t", "0.5"),
    ("boundary", "--norm", "curve:0,1;0.5,0.9;1,0", "--n", "9"),
    ("classify", "--norm", "p:inf"),
    ("support", "--norm", "p:1", "--x0", "0"),
    ("validate", "--norm", "p:2", "--samples", "1000", "--seed", "3"),
    ("bgp-check", "--norm", "p:2", "--epsilons", "0.5,2"),
    ("lemma", "--norm", "p:2", "--X", "p:2,1", "--Y", "p:2,1",
     "--y", "2", "--r", "1", "--s", "3", "--samples", "5000", "--seed", "7"),
]


def test_criterion_9_cli_determinism():
    ok = True
    for args in CLI_CASES:
        runs = [
            subprocess.run(
                [sys.executable, "-m", "absnorm.cli", *args],
                capture_output=True,
                text=True,
            )
            for _ in range(2)
        ]
        if runs[0].returncode != 0 or runs[0].stdout != runs[1].stdout:
            ok = False
    assert _report("criterion 9: CLI determinism across repeated runs", ok)
