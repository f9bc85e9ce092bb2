import math

import pytest

import absnorm as an

P_ZOO = (1.0, 1.5, 2.0, 3.0, 4.0, math.inf)
MIX_WEIGHTS = (0.25, 0.5, 0.75)

HEX_KINK_POINTS = ((0.0, 1.0), (0.5, 0.9), (1.0, 0.0))
HEX_FLAT_POINTS = ((0.0, 1.0), (0.5, 1.0), (1.0, 0.0))


def make_p_specs():
    return {p: an.NormSpec.p_norm(p) for p in P_ZOO}


def make_mixture_specs():
    p1 = an.NormSpec.p_norm(1.0)
    pinf = an.NormSpec.p_norm(math.inf)
    return {lam: an.NormSpec.mixture(lam, p1, pinf) for lam in MIX_WEIGHTS}


def make_curve_specs():
    return {
        "hex_kink": an.gauge_from_curve(HEX_KINK_POINTS),
        "hex_flat": an.gauge_from_curve(HEX_FLAT_POINTS),
    }


def p_boundary_oracle(p, x):
    """Closed-form boundary height for the p-norm."""
    if math.isinf(p):
        return 1.0
    return (1.0 - abs(x) ** p) ** (1.0 / p)


def mixture_boundary_oracle(lam, x):
    """Closed-form boundary height for the taxicab/sup mixture.

    Derived by solving lam*(|x| + t) + (1 - lam)*max(|x|, t) = 1 on both
    sides of the t = |x| switch.
    """
    u = abs(x)
    if lam == 0.0:
        return 1.0
    if u <= 1.0 / (1.0 + lam):
        return 1.0 - lam * u
    return (1.0 - u) / lam


@pytest.fixture(scope="session")
def p_specs():
    return make_p_specs()


@pytest.fixture(scope="session")
def mixture_specs():
    return make_mixture_specs()


@pytest.fixture(scope="session")
def curve_specs():
    return make_curve_specs()


@pytest.fixture(scope="session")
def zoo(p_specs, mixture_specs, curve_specs):
    return list(p_specs.values()) + list(mixture_specs.values()) + list(curve_specs.values())
