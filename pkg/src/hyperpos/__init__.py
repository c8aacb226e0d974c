"""Positivity of 1F2(a; b, c; -x^2/4): evaluation, classification and zero brackets."""

from .errors import ConvergenceError, DomainError, HyperposError, PoleError, SearchError
from .special_core import (
    HypergeometricSpec,
    Method,
    ParameterTriple,
    SeriesEvaluation,
    asymptotic_1F2,
    beta,
    eval_1F2,
    eval_pFq,
    ln_gamma,
    pochhammer,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "HyperposError",
    "HypergeometricSpec",
    "Method",
    "ParameterTriple",
    "PoleError",
    "SearchError",
    "SeriesEvaluation",
    "asymptotic_1F2",
    "beta",
    "eval_1F2",
    "eval_pFq",
    "ln_gamma",
    "pochhammer",
]
