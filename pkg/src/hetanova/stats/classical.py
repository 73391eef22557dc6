"""
Homoscedastic two-way ANOVA F test for factor A (simulation baseline)
"""

import numpy as np
from scipy import stats

from hetanova.data.summary import CellSummaryTable
from hetanova.stats.base import StatisticKind, StatisticValue


def _row_contrast_matrix(a: int, b: int) -> np.ndarray:
    """(a-1) x ab contrasts of row means against the last row, row-major cells."""
    rows = np.eye(a)[:-1] - np.eye(a)[-1]
    return np.kron(rows, np.full(b, 1.0 / b))


def classical_f_values(mean, var, n) -> np.ndarray:
    """
    Batched Type III F statistic for A with unweighted cell means.

    SS_A is the quadratic form of the row-mean contrasts in their
    homoscedastic covariance; MSE pools the within-cell sums of squares.
    """
    a, b = n.shape
    C = _row_contrast_matrix(a, b)
    flat = mean.reshape(mean.shape[:-2] + (a * b,))
    contrast = flat @ C.T
    precision = np.linalg.inv((C / n.ravel()) @ C.T)
    ss_a = np.einsum("...k,kl,...l->...", contrast, precision, contrast)
    df_error = n.sum() - a * b
    mse = ((n - 1) * var).sum(axis=(-2, -1)) / df_error
    return ss_a / (a - 1) / mse


def classical_F_A(summary: CellSummaryTable) -> StatisticValue:
    """F for factor-A main effects from a model with interaction, with its p-value."""
    summary.require_nondegenerate()
    n = summary.n.astype(float)
    value = float(classical_f_values(summary.mean, summary.var, n))
    dfn, dfd = summary.a - 1, summary.layout.N - summary.a * summary.b
    return StatisticValue(
        kind=StatisticKind.CLASSICAL_F_A,
        value=value,
        p_value=float(stats.f.sf(value, dfn, dfd)),
        df=(dfn, dfd),
    )
