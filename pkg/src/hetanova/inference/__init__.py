"""
Bootstrap, asymptotic and orchestrated inference for hetanova
"""

from hetanova.inference.asymptotic import (
    AsymptoticCovariance,
    AsymptoticKind,
    AsymptoticResult,
    asymptotic_test,
    build_sigma_T,
    chi_square_critical,
    equicoordinate_quantile,
)
from hetanova.inference.bootstrap import (
    BootstrapResult,
    BootstrapSettings,
    bootstrap_null_sample,
    bootstrap_test,
    clear_cache,
    write_null_sample,
)
from hetanova.inference.intervals import (
    CIFamily,
    CriticalSource,
    Interval,
    PairDecision,
    SimultaneousCI,
    pairwise_decisions,
    simultaneous_ci,
)
from hetanova.inference.runner import Decision, Method, Target, TestReport, TestRequest, run_test

__all__ = [
    "AsymptoticCovariance",
    "AsymptoticKind",
    "AsymptoticResult",
    "BootstrapResult",
    "BootstrapSettings",
    "CIFamily",
    "CriticalSource",
    "Decision",
    "Interval",
    "Method",
    "PairDecision",
    "SimultaneousCI",
    "Target",
    "TestReport",
    "TestRequest",
    "asymptotic_test",
    "bootstrap_null_sample",
    "bootstrap_test",
    "build_sigma_T",
    "chi_square_critical",
    "clear_cache",
    "equicoordinate_quantile",
    "pairwise_decisions",
    "run_test",
    "simultaneous_ci",
    "write_null_sample",
]
