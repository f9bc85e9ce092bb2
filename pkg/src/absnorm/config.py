"""Numerical tolerances, overridable per call and from the CLI."""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # advertised root-finding accuracy; the bisection allowance 2*root/h in
    # derivative brackets is derived from this value
    root: float = 1e-12
    # bracket-width thresholds for the 3-valued smoothness verdict
    smooth: float = 1e-6
    corner: float = 1e-4
    # strict-concavity midpoint excess threshold and its dead-zone floor
    strict_concave: float = 1e-9
    concave_slack: float = 1e-12
    # support-functional certificates (dual norm and attainment)
    cert: float = 1e-8
    # |boundary value at 1| below which the endpoint is treated as 0; the
    # band [zero_floor, zero_band] is the ambiguous zone of the case split
    zero_floor: float = 1e-12
    zero_band: float = 1e-9
    # slope estimate below this is classified as unbounded
    slope_divergence: float = -1e6
    # mean-value certification slack
    mvt: float = 1e-6
    # condition-margin decision floor: margins within [-floor, floor] of 0
    # are undecided
    margin_floor: float = 1e-9

    def override(self, **kwargs):
        unknown = set(kwargs) - set(self.__dataclass_fields__)
        if unknown:
            raise KeyError(f"unknown tolerance name(s): {', '.join(sorted(unknown))}")
        return replace(self, **kwargs)


DEFAULT_TOL = Tolerances()

# ladder of step sizes for one-sided difference-quotient brackets
H_LADDER = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7)
