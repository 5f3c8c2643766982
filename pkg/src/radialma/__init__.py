"""Exact Monge-Ampere measures for radial piecewise-linear psh profiles.

Everything is driven by the convex profile chi of u(z) = chi(log ||z||):
measures, truncations, nonpolar parts, extremal functions and
capacities are closed-form in the knots and slopes, so convergence
theorems can be probed with exactly computed series instead of
discretization error.
"""

from .capacity import (
    ExtremalResult,
    capacity,
    condition_level,
    condition_sublevel,
    extremal,
    extremal_profile,
)
from .convergence import (
    HarnessReport,
    ProfileSequence,
    cegrell_f_diagnostic,
    check_decreasing,
    clipped_sequence,
    counterexample_sequence,
    generalized_condition,
    ma_domain_membership,
    maximality_check,
    random_decreasing_sequence,
    setwise_gap,
    shifted_sequence,
    truncation_analysis,
    truncation_sequence,
    weak_convergence_test,
)
from .errors import (
    CompactTouchesBoundary,
    ConvexityViolation,
    EmptyCompact,
    MonotonicityViolation,
    NegativeSecondDifference,
    NonMonotoneSequence,
    NonStabilized,
    NotAdmissible,
    NotConverged,
    NotConvexOnGrid,
    OutOfDomain,
    RadialMAError,
    UnorderedBreakpoints,
)
from .families import (
    LinearCap,
    Log,
    MaxConst,
    PowerTail,
    constant_profile,
    default_battery,
    linear_cap_profile,
    log_profile,
    max_const_profile,
    power_tail_profile,
    punctured_battery,
    random_compact,
    random_profile,
    sample_analytic,
    standard_exhaustion,
)
from .measures import (
    RadialMeasure,
    RadialTestFunction,
    annular_plateau,
    distribution_function,
    hat,
    ma_measure,
    nonpolar_part,
    plateau,
)
from .oracle import (
    Grid1D,
    fd_riesz_measure,
    oracle_capacity,
    relaxation_envelope,
)
from .profiles import (
    ConvexProfile,
    FiniteValue,
    MinusInfinity,
    RadialCompact,
    annulus,
    closed_ball,
    empty_compact,
    make_compact,
    make_profile,
    sphere,
)
from .series import (
    CONVERGING_TO_POSITIVE,
    CONVERGING_TO_ZERO,
    INCONCLUSIVE,
    DiagnosticSeries,
    build_series,
    geometric_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "CONVERGING_TO_POSITIVE",
    "CONVERGING_TO_ZERO",
    "CompactTouchesBoundary",
    "ConvexProfile",
    "ConvexityViolation",
    "DiagnosticSeries",
    "EmptyCompact",
    "ExtremalResult",
    "FiniteValue",
    "Grid1D",
    "HarnessReport",
    "INCONCLUSIVE",
    "LinearCap",
    "Log",
    "MaxConst",
    "MinusInfinity",
    "MonotonicityViolation",
    "NegativeSecondDifference",
    "NonMonotoneSequence",
    "NonStabilized",
    "NotAdmissible",
    "NotConverged",
    "NotConvexOnGrid",
    "OutOfDomain",
    "PowerTail",
    "ProfileSequence",
    "RadialCompact",
    "RadialMAError",
    "RadialMeasure",
    "RadialTestFunction",
    "UnorderedBreakpoints",
    "annular_plateau",
    "annulus",
    "build_series",
    "capacity",
    "cegrell_f_diagnostic",
    "check_decreasing",
    "clipped_sequence",
    "closed_ball",
    "condition_level",
    "condition_sublevel",
    "constant_profile",
    "counterexample_sequence",
    "default_battery",
    "distribution_function",
    "empty_compact",
    "extremal",
    "extremal_profile",
    "fd_riesz_measure",
    "generalized_condition",
    "geometric_schedule",
    "hat",
    "linear_cap_profile",
    "log_profile",
    "ma_domain_membership",
    "ma_measure",
    "make_compact",
    "make_profile",
    "max_const_profile",
    "maximality_check",
    "nonpolar_part",
    "oracle_capacity",
    "plateau",
    "power_tail_profile",
    "punctured_battery",
    "random_compact",
    "random_decreasing_sequence",
    "random_profile",
    "relaxation_envelope",
    "sample_analytic",
    "setwise_gap",
    "shifted_sequence",
    "sphere",
    "standard_exhaustion",
    "truncation_analysis",
    "truncation_sequence",
    "weak_convergence_test",
]
