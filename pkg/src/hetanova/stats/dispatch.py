"""
Statistic dispatch for hetanova
"""

import numpy as np

from hetanova.data.summary import CellSummaryTable
from hetanova.mle.models import SolverSettings
from hetanova.stats.base import StatisticKind, StatisticValue
from hetanova.stats.classical import classical_F_A, classical_f_values
from hetanova.stats.lrt import lrt_interaction, lrt_log_values, lrt_simple_A, lrt_treatment_A
from hetanova.stats.mct import mct_interaction, mct_simple_A, mct_treatment_A, mct_values

_LRT = {
    StatisticKind.LRT_INTERACTION: lrt_interaction,
    StatisticKind.LRT_SIMPLE_A: lrt_simple_A,
    StatisticKind.LRT_TREATMENT_A: lrt_treatment_A,
}

_CLOSED_FORM = {
    StatisticKind.MCT_INTERACTION: mct_interaction,
    StatisticKind.MCT_SIMPLE_A: mct_simple_A,
    StatisticKind.MCT_TREATMENT_A: mct_treatment_A,
    StatisticKind.CLASSICAL_F_A: classical_F_A,
}


def compute_statistic(
    summary: CellSummaryTable,
    kind: StatisticKind,
    solver: SolverSettings | None = None,
    require_converged: bool = True,
) -> StatisticValue:
    """Compute any statistic kind on one summary."""
    kind = StatisticKind(kind)
    if kind in _LRT:
        return _LRT[kind](summary, solver, require_converged=require_converged)
    return _CLOSED_FORM[kind](summary)


def batched_statistic(
    kind: StatisticKind,
    mean: np.ndarray,
    var: np.ndarray,
    n: np.ndarray,
    solver: SolverSettings,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Evaluate a statistic across leading batch axes.

    LRT kinds come back as log lambda. Closed-form kinds always converge.

    Returns:
        tuple: (values, converged mask)
    """
    if kind.is_lrt:
        return lrt_log_values(kind, mean, var, n, solver)
    if kind.is_mct:
        values = mct_values(kind, mean, var, n)
    else:
        values = classical_f_values(mean, var, n)
    return values, np.ones(values.shape, dtype=bool)
