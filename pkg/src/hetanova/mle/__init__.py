"""
Maximum-likelihood estimation for hetanova
"""

from hetanova.mle.models import FittedModel, ParameterSpace, SolverSettings
from hetanova.mle.solvers import (
    fit_full,
    fit_null_no_interaction,
    fit_null_no_simple_A,
    log_likelihood,
    stationarity_residuals,
)

__all__ = [
    "FittedModel",
    "ParameterSpace",
    "SolverSettings",
    "fit_full",
    "fit_null_no_interaction",
    "fit_null_no_simple_A",
    "log_likelihood",
    "stationarity_residuals",
]
