"""
Likelihood-ratio statistics for hetanova

Every ratio is a product of per-cell variance ratios raised to n_ij / 2 and is
accumulated on the log scale.
"""

import logging

import numpy as np

from hetanova.data.summary import CellSummaryTable
from hetanova.mle.models import SolverSettings
from hetanova.mle.solvers import (
    biased_variance,
    fit_full,
    fit_null_no_interaction,
    fit_null_no_simple_A,
    solve_additive,
    solve_no_simple_a,
)
from hetanova.stats.base import StatisticKind, StatisticValue
from hetanova.utils.errors import NestingViolation

# Configure logging
logger = logging.getLogger("hetanova")

# Rounding slack before a positive log ratio counts as a broken nesting
LOG_RATIO_TOLERANCE = 1e-8


def raw_log_ratio(sigma2_num: np.ndarray, sigma2_den: np.ndarray, n: np.ndarray) -> np.ndarray:
    """log of prod (sigma2_num / sigma2_den)^(n/2), unclipped."""
    terms = 0.5 * n * (np.log(sigma2_num) - np.log(sigma2_den))
    return terms.sum(axis=(-2, -1))


def log_ratio(sigma2_num: np.ndarray, sigma2_den: np.ndarray, n: np.ndarray) -> np.ndarray:
    """
    log of prod (sigma2_num / sigma2_den)^(n/2), clipped at 0.

    The numerator space contains the denominator space, so only rounding can
    push the sum above 0. Anything above LOG_RATIO_TOLERANCE means one of
    the fits stopped short of its maximum.

    Raises:
        NestingViolation: if any value exceeds the tolerance
    """
    total = raw_log_ratio(sigma2_num, sigma2_den, n)
    if np.any(total > LOG_RATIO_TOLERANCE):
        raise NestingViolation(
            f"log likelihood ratio is {float(np.max(total)):.6g} > 0; "
            "the larger model scored below the smaller one"
        )
    return np.minimum(total, 0.0)


def _checked(total: np.ndarray, converged: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Clip batched log ratios, failing replicates that break the nesting."""
    nested = total <= LOG_RATIO_TOLERANCE
    if not np.all(nested):
        logger.warning(
            f"{int(np.sum(~nested))} replicate(s) gave a positive log likelihood ratio; "
            "treating them as non-converged"
        )
    return np.minimum(total, 0.0), converged & nested


def lrt_log_values(
    kind: StatisticKind,
    mean: np.ndarray,
    var: np.ndarray,
    n: np.ndarray,
    settings: SolverSettings,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Batched log likelihood ratios.

    Returns:
        tuple: (log lambda, converged mask), both shaped like the batch axes
    """
    if kind == StatisticKind.LRT_INTERACTION:
        additive = solve_additive(mean, var, n, settings)
        total = raw_log_ratio(biased_variance(var, n), additive.sigma2, n)
        return _checked(total, additive.converged)
    if kind == StatisticKind.LRT_SIMPLE_A:
        null = solve_no_simple_a(mean, var, n, settings)
        total = raw_log_ratio(biased_variance(var, n), null.sigma2, n)
        return _checked(total, null.converged)
    if kind == StatisticKind.LRT_TREATMENT_A:
        null = solve_no_simple_a(mean, var, n, settings)
        additive = solve_additive(mean, var, n, settings, null)
        total = raw_log_ratio(additive.sigma2, null.sigma2, n)
        return _checked(total, additive.converged & null.converged)
    raise ValueError(f"{kind.value} is not a likelihood-ratio statistic")


def _value(kind, log_value, fits) -> StatisticValue:
    return StatisticValue(
        kind=kind,
        value=float(np.exp(log_value)),
        log_value=float(log_value),
        diagnostics={fit.space.value: fit.diagnostics() for fit in fits},
    )


def lrt_interaction(
    summary: CellSummaryTable,
    settings: SolverSettings | None = None,
    require_converged: bool = True,
) -> StatisticValue:
    """Likelihood ratio of the additive model against the full model."""
    n = summary.n.astype(float)
    full = fit_full(summary)
    null = fit_null_no_interaction(summary, settings, require_converged=require_converged)
    log_value = log_ratio(full.sigma2, null.sigma2, n)
    return _value(StatisticKind.LRT_INTERACTION, log_value, (full, null))


def lrt_simple_A(
    summary: CellSummaryTable,
    settings: SolverSettings | None = None,
    require_converged: bool = True,
) -> StatisticValue:
    """Likelihood ratio of 'no factor-A simple effects' against the full model."""
    n = summary.n.astype(float)
    full = fit_full(summary)
    null = fit_null_no_simple_A(summary, settings, require_converged=require_converged)
    log_value = log_ratio(full.sigma2, null.sigma2, n)
    return _value(StatisticKind.LRT_SIMPLE_A, log_value, (full, null))


def lrt_treatment_A(
    summary: CellSummaryTable,
    settings: SolverSettings | None = None,
    require_converged: bool = True,
) -> StatisticValue:
    """
    Likelihood ratio for factor-A main effects within the additive model.

    Both fits are constrained: the additive model is the numerator and the
    no-simple-A model the denominator.
    """
    n = summary.n.astype(float)
    null = fit_null_no_simple_A(summary, settings, require_converged=require_converged)
    additive = fit_null_no_interaction(
        summary, settings, require_converged=require_converged, null=null
    )
    log_value = log_ratio(additive.sigma2, null.sigma2, n)
    return _value(StatisticKind.LRT_TREATMENT_A, log_value, (additive, null))
