"""Asymptotics of localized oscillatory integrals for circle actions.

The package computes the small-epsilon expansion of the local-model
contribution of a fixed-point component — including the singular one-sided
terms that switch on at the critical momentum value — and verifies it against
direct non-oscillatory quadrature of the same integral.
"""

from .amplitude import AmplitudeSpec, SphericalMean, make_scaled_mean, spherical_mean
from .exactscalar import ExactScalar
from .coeffs import (
    CoeffTable,
    C_Nmpq,
    N_pm,
    c_def_jk,
    c_jkl,
    c_l,
    c_pm_j0pq,
    leading_constants,
)
from .expansion import (
    BRACKET_MINUS,
    BRACKET_PLUS,
    SIGMA_DERIV,
    CoefficientEntry,
    ExpansionResult,
    SingularTerm,
    expand,
    expand_definite,
    expand_indefinite,
    one_sided_limits,
)
from .kernels import FKernel, F_derivative, F_eval
from .model import LocalModel, make_model
from .oracle import (
    OracleConfig,
    SlopeFit,
    default_oracle_config,
    eval_grid,
    eval_integral,
    extract_coefficients,
    remainder_slope,
)
from .polynomials import RatPoly
from .quadric import QuadricSlice, W_Dpm_integral, hypersurface_integral
from .scenario import Scenario, load_scenario, parse_scenario, serialize_scenario
from .schwartz import SchwartzSpec, sigma_bracket, sigma_deriv_at_zero

__version__ = "0.1.0"

__all__ = [
    "AmplitudeSpec",
    "BRACKET_MINUS",
    "BRACKET_PLUS",
    "C_Nmpq",
    "CoeffTable",
    "CoefficientEntry",
    "ExactScalar",
    "ExpansionResult",
    "FKernel",
    "F_derivative",
    "F_eval",
    "LocalModel",
    "N_pm",
    "OracleConfig",
    "QuadricSlice",
    "RatPoly",
    "Scenario",
    "SchwartzSpec",
    "SIGMA_DERIV",
    "SingularTerm",
    "SlopeFit",
    "SphericalMean",
    "W_Dpm_integral",
    "c_def_jk",
    "c_jkl",
    "c_l",
    "c_pm_j0pq",
    "default_oracle_config",
    "eval_grid",
    "eval_integral",
    "expand",
    "expand_definite",
    "expand_indefinite",
    "extract_coefficients",
    "hypersurface_integral",
    "leading_constants",
    "load_scenario",
    "make_model",
    "make_scaled_mean",
    "one_sided_limits",
    "parse_scenario",
    "remainder_slope",
    "serialize_scenario",
    "sigma_bracket",
    "sigma_deriv_at_zero",
    "spherical_mean",
    "__version__",
]
