"""Involutions generated by ``phi(x) = x^a - x^b`` and their Lagrange-inversion series."""

__version__ = "0.1.0"

from .errors import (
    AccuracyError,
    ContractViolation,
    ConvergenceError,
    DomainError,
    InvolutError,
    NonInvertibleError,
    ParameterError,
    PoleError,
    UnsupportedOrderError,
)
from .exact_series import PowerSeries, pochhammer, series_reversion, expand_phi_at_one
from .identities import CoefficientFamily, Family, coeff
from .involution import EvalResult, Method, PhiParams, f_bisect, f_eval, g_eval, hypergeom_g, phi
from .lambert import LambertCase, LambertEval, g_lambert, lambert_f, w0
from .analysis import FunctionHandle, QuadratureResult, integrate
from .report import IdentityReport

__all__ = [
    "AccuracyError", "ContractViolation", "ConvergenceError", "DomainError", "InvolutError",
    "NonInvertibleError", "ParameterError", "PoleError", "UnsupportedOrderError",
    "PowerSeries", "pochhammer", "series_reversion", "expand_phi_at_one",
    "CoefficientFamily", "Family", "coeff",
    "EvalResult", "Method", "PhiParams", "f_bisect", "f_eval", "g_eval", "hypergeom_g", "phi",
    "LambertCase", "LambertEval", "g_lambert", "lambert_f", "w0",
    "FunctionHandle", "QuadratureResult", "integrate",
    "IdentityReport",
]
