"""Toolkit for absolute normalized norms on the plane.

Covers norm construction and validation, the boundary curve of the unit ball
with certified brackets, support-functional sets and smoothness verdicts,
and the tail conditions governing preservation of the ball-generated
property under two-component direct sums.
"""

from ._backend import backend_name
from .boundary import (
    BoundaryCurve,
    ConvexityReport,
    DerivativeBracket,
    boundary_bracket,
    boundary_value,
    classify_convexity,
    derivative_bracket,
    endpoint_limit_probe,
    mvt_check,
    psi_curve,
    slope_interval,
    tabulate,
    uniqueness_probe,
)
from .bgp import (
    BgpVerdict,
    ConditionWitness,
    CrosscheckReport,
    DEFAULT_EPSILONS,
    FiniteSpace,
    InclusionReport,
    bgp_sum_verdict,
    check_condition,
    equivalence_crosscheck,
    lemma_inclusion_verify,
    lp_space,
    smooth_at_basis,
    space_from_spec,
    sum_norm,
    sum_space,
    validate_space,
)
from .config import DEFAULT_TOL, Tolerances
from .errors import (
    AbsnormError,
    ConcavityViolationError,
    DegenerateFunctionalError,
    DomainError,
    PreconditionError,
    SpecError,
    SpecParseError,
    UndecidedCaseError,
)
from .normspec import (
    Functional,
    NormSpec,
    ValidationReport,
    dual_norm,
    eval_norm,
    eval_norm_many,
    format_spec,
    gauge_from_curve,
    parse_spec,
    swap_spec,
    validate_norm,
)
from .support import (
    GateauxVerdict,
    SupportSet,
    directional_derivative_probe,
    gateaux_at,
    gateaux_on_vertical_edge,
    support_set_endpoint,
    support_set_interior,
    tail_slope_infimum,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "__version__",
    # errors
    "AbsnormError", "SpecError", "SpecParseError", "DomainError",
    "ConcavityViolationError", "DegenerateFunctionalError",
    "UndecidedCaseError", "PreconditionError",
    # config
    "Tolerances", "DEFAULT_TOL",
    # norm core
    "NormSpec", "Functional", "ValidationReport", "eval_norm", "eval_norm_many",
    "validate_norm", "dual_norm", "gauge_from_curve", "swap_spec",
    "parse_spec", "format_spec",
    # boundary
    "BoundaryCurve", "DerivativeBracket", "ConvexityReport", "boundary_value",
    "boundary_bracket", "derivative_bracket", "slope_interval",
    "endpoint_limit_probe", "uniqueness_probe", "mvt_check", "psi_curve",
    "classify_convexity", "tabulate",
    # support
    "SupportSet", "GateauxVerdict", "support_set_interior",
    "support_set_endpoint", "gateaux_at", "gateaux_on_vertical_edge",
    "directional_derivative_probe", "tail_slope_infimum",
    # sums
    "FiniteSpace", "ConditionWitness", "CrosscheckReport", "InclusionReport",
    "BgpVerdict", "DEFAULT_EPSILONS", "lp_space", "space_from_spec",
    "sum_space", "validate_space", "check_condition", "smooth_at_basis",
    "equivalence_crosscheck", "sum_norm", "lemma_inclusion_verify",
    "bgp_sum_verdict",
]
