"""
Max-type multiple comparison statistics for hetanova
"""

import numpy as np

from hetanova.data.summary import CellSummaryTable
from hetanova.stats.base import StatisticKind, StatisticValue


def pairs(k: int) -> tuple[np.ndarray, np.ndarray]:
    """0-based index pairs (l, m), l < m, ordered (0,1), (0,2), ..., (k-2,k-1)."""
    return np.triu_indices(k, 1)


def interaction_contrasts(mean, var, n) -> tuple[np.ndarray, np.ndarray]:
    """
    Interaction contrasts and their standard errors.

    Returns:
        tuple: (estimate, se), each of shape (..., a, b(b-1)/2)
    """
    a = mean.shape[-2]
    j1, j2 = pairs(mean.shape[-1])
    v = var / n
    col = mean.mean(axis=-2, keepdims=True)
    centered = mean - col
    estimate = centered[..., j1] - centered[..., j2]
    v_pair = v[..., j1] + v[..., j2]
    se2 = (1.0 - 2.0 / a) * v_pair + v_pair.sum(axis=-2, keepdims=True) / a**2
    return estimate, np.sqrt(se2)


def simple_a_contrasts(mean, var, n) -> tuple[np.ndarray, np.ndarray]:
    """Within-column row differences, each of shape (..., a(a-1)/2, b)."""
    i1, i2 = pairs(mean.shape[-2])
    v = var / n
    estimate = mean[..., i1, :] - mean[..., i2, :]
    return estimate, np.sqrt(v[..., i1, :] + v[..., i2, :])


def treatment_a_contrasts(mean, var, n) -> tuple[np.ndarray, np.ndarray]:
    """Row-marginal differences and their standard errors, shape (..., a(a-1)/2)."""
    b = mean.shape[-1]
    i1, i2 = pairs(mean.shape[-2])
    row = mean.mean(axis=-1)
    row_var = (var / n).sum(axis=-1)
    estimate = row[..., i1] - row[..., i2]
    return estimate, np.sqrt(row_var[..., i1] + row_var[..., i2]) / b


CONTRASTS = {
    StatisticKind.MCT_INTERACTION: interaction_contrasts,
    StatisticKind.MCT_SIMPLE_A: simple_a_contrasts,
    StatisticKind.MCT_TREATMENT_A: treatment_a_contrasts,
}


def contrast_labels(kind: StatisticKind, a: int, b: int) -> list[str]:
    """1-based labels in the flattened order of the contrast arrays."""
    if kind == StatisticKind.MCT_INTERACTION:
        j1, j2 = pairs(b)
        return [f"({i + 1},{l + 1})-({i + 1},{m + 1})" for i in range(a) for l, m in zip(j1, j2)]
    if kind == StatisticKind.MCT_SIMPLE_A:
        i1, i2 = pairs(a)
        return [f"({l + 1},{j + 1})-({m + 1},{j + 1})" for l, m in zip(i1, i2) for j in range(b)]
    if kind == StatisticKind.MCT_TREATMENT_A:
        i1, i2 = pairs(a)
        return [f"{l + 1}-{m + 1}" for l, m in zip(i1, i2)]
    raise ValueError(f"{kind.value} is not a max-type statistic")


def mct_components(kind: StatisticKind, mean, var, n) -> np.ndarray:
    """Standardized contrasts flattened to shape (..., K)."""
    estimate, se = CONTRASTS[kind](mean, var, n)
    batch = mean.shape[:-2]
    return (estimate / se).reshape(batch + (-1,))


def mct_values(kind: StatisticKind, mean, var, n) -> np.ndarray:
    """Batched max |component|."""
    return np.abs(mct_components(kind, mean, var, n)).max(axis=-1)


def _statistic(kind: StatisticKind, summary: CellSummaryTable) -> StatisticValue:
    summary.require_nondegenerate()
    n = summary.n.astype(float)
    estimate, se = CONTRASTS[kind](summary.mean, summary.var, n)
    detail = estimate / se
    return StatisticValue(
        kind=kind,
        value=float(np.abs(detail).max()),
        detail=detail,
        labels=contrast_labels(kind, summary.a, summary.b),
    )


def mct_interaction(summary: CellSummaryTable) -> StatisticValue:
    """Q: max standardized interaction contrast; detail shape (a, b(b-1)/2)."""
    return _statistic(StatisticKind.MCT_INTERACTION, summary)


def mct_simple_A(summary: CellSummaryTable) -> StatisticValue:
    """R: max standardized within-column row difference; detail (a(a-1)/2, b)."""
    return _statistic(StatisticKind.MCT_SIMPLE_A, summary)


def mct_treatment_A(summary: CellSummaryTable) -> StatisticValue:
    """T: max standardized difference of row marginals; detail (a(a-1)/2,)."""
    return _statistic(StatisticKind.MCT_TREATMENT_A, summary)
