"""
Simultaneous confidence intervals and pairwise decisions for hetanova
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
import pandas as pd

from hetanova.data.summary import CellSummaryTable
from hetanova.inference.asymptotic import build_sigma_T, equicoordinate_quantile
from hetanova.inference.bootstrap import (
    BootstrapSettings,
    empirical_critical,
    null_reference_sample,
    require_reported_replicates,
)
from hetanova.mle.models import SolverSettings
from hetanova.stats.base import StatisticKind, Tail
from hetanova.stats.mct import (
    interaction_contrasts,
    pairs,
    simple_a_contrasts,
    treatment_a_contrasts,
)
from hetanova.utils.config import DEFAULT_ALPHA, DEFAULT_MC_DRAWS, DEFAULT_MC_SEED
from hetanova.utils.errors import InvalidSettings, UnsupportedCombination

# Configure logging
logger = logging.getLogger("hetanova")


class CIFamily(str, Enum):
    INTERACTION_PAIRS = "interaction"
    SIMPLE_A_PAIRS = "simpleA"
    SIMPLE_B_PAIRS = "simpleB"
    TREATMENT_A_PAIRS = "treatmentA"
    TREATMENT_B_PAIRS = "treatmentB"

    @property
    def statistic_kind(self) -> StatisticKind:
        if self == CIFamily.INTERACTION_PAIRS:
            return StatisticKind.MCT_INTERACTION
        if self in (CIFamily.SIMPLE_A_PAIRS, CIFamily.SIMPLE_B_PAIRS):
            return StatisticKind.MCT_SIMPLE_A
        return StatisticKind.MCT_TREATMENT_A

    @property
    def transposed(self) -> bool:
        return self in (CIFamily.SIMPLE_B_PAIRS, CIFamily.TREATMENT_B_PAIRS)


class CriticalSource(str, Enum):
    BOOTSTRAP = "bootstrap"
    ASYMPTOTIC = "asymptotic"


class Interval(NamedTuple):
    label: str
    estimate: float
    lower: float
    upper: float
    significant: bool


class PairDecision(NamedTuple):
    pair: tuple[int, int]
    statistic: float
    reject: bool


@dataclass(frozen=True)
class SimultaneousCI:
    """Pairwise-contrast intervals sharing one family-wise level."""

    family: CIFamily
    level: float
    critical_value: float
    intervals: list[Interval]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.intervals, columns=list(Interval._fields))

    def to_csv(self, path=None) -> str | None:
        return self.to_frame().to_csv(path, index=False)

    def to_text(self) -> str:
        frame = self.to_frame()
        header = (
            f"{self.level:.0%} simultaneous intervals ({self.family.value}), "
            f"critical multiplier {self.critical_value:.4f}"
        )
        return header + "\n" + frame.to_string(index=False, float_format=lambda v: f"{v:.4f}")


_CONTRASTS = {
    CIFamily.INTERACTION_PAIRS: interaction_contrasts,
    CIFamily.SIMPLE_A_PAIRS: simple_a_contrasts,
    CIFamily.SIMPLE_B_PAIRS: simple_a_contrasts,
    CIFamily.TREATMENT_A_PAIRS: treatment_a_contrasts,
    CIFamily.TREATMENT_B_PAIRS: treatment_a_contrasts,
}


def _labels(family: CIFamily, a: int, b: int) -> list[str]:
    """Labels in the oriented (possibly transposed) layout's contrast order."""
    row, col = ("B", "A") if family.transposed else ("A", "B")
    if family == CIFamily.INTERACTION_PAIRS:
        j1, j2 = pairs(b)
        return [f"({i + 1},{l + 1})-({i + 1},{m + 1})" for i in range(a) for l, m in zip(j1, j2)]
    i1, i2 = pairs(a)
    if family in (CIFamily.SIMPLE_A_PAIRS, CIFamily.SIMPLE_B_PAIRS):
        return [
            f"{row}{l + 1}-{row}{m + 1}|{col}{j + 1}" for l, m in zip(i1, i2) for j in range(b)
        ]
    return [f"{row}{l + 1}-{row}{m + 1}" for l, m in zip(i1, i2)]


def critical_multiplier(
    summary: CellSummaryTable,
    kind: StatisticKind,
    alpha: float,
    source: CriticalSource = CriticalSource.BOOTSTRAP,
    bootstrap: BootstrapSettings | None = None,
    solver: SolverSettings | None = None,
    threads: int | None = None,
    mc_draws: int = DEFAULT_MC_DRAWS,
    mc_seed: int = DEFAULT_MC_SEED,
) -> float:
    """
    Upper critical value of a max-type statistic on an oriented summary.

    The bootstrap sample is shared through the null-sample cache with any
    test run on the same summary, seed and replicate count.
    """
    if not 0 < alpha < 1:
        raise InvalidSettings(f"alpha must lie in (0, 1), got {alpha}")
    source = CriticalSource(source)
    if source == CriticalSource.ASYMPTOTIC:
        if kind != StatisticKind.MCT_TREATMENT_A:
            raise UnsupportedCombination(
                "asymptotic multipliers exist only for treatment-effect comparisons"
            )
        return equicoordinate_quantile(build_sigma_T(summary), alpha, mc_draws, mc_seed)
    if bootstrap is None:
        raise InvalidSettings("bootstrap settings are required for bootstrap multipliers")
    require_reported_replicates(bootstrap)
    solver = solver or SolverSettings()
    sample, _ = null_reference_sample(summary, kind, bootstrap, solver, threads)
    return empirical_critical(sample, alpha, Tail.UPPER)


def simultaneous_ci(
    summary: CellSummaryTable,
    family: CIFamily,
    alpha: float = DEFAULT_ALPHA,
    bootstrap: BootstrapSettings | None = None,
    solver: SolverSettings | None = None,
    source: CriticalSource = CriticalSource.BOOTSTRAP,
    threads: int | None = None,
    mc_draws: int = DEFAULT_MC_DRAWS,
    mc_seed: int = DEFAULT_MC_SEED,
) -> SimultaneousCI:
    """
    Simultaneous 100(1 - alpha)% intervals: estimate +/- d * standard error.

    Args:
        summary: observed cell summaries
        family: which pairwise contrasts
        alpha: family-wise level
        bootstrap: settings of the null sample giving d
        solver: unused by max-type statistics, part of the cache key
        source: bootstrap d, or the equicoordinate quantile for treatment pairs

    Returns:
        SimultaneousCI: one interval per contrast
    """
    family = CIFamily(family)
    oriented = summary.transpose() if family.transposed else summary
    oriented.require_nondegenerate()
    d = critical_multiplier(
        oriented, family.statistic_kind, alpha, source, bootstrap, solver, threads,
        mc_draws, mc_seed,
    )

    estimate, se = _CONTRASTS[family](
        oriented.mean, oriented.var, oriented.n.astype(float)
    )
    estimate, se = np.ravel(estimate), np.ravel(se)
    lower, upper = estimate - d * se, estimate + d * se
    labels = _labels(family, oriented.a, oriented.b)
    intervals = [
        Interval(label, float(e), float(lo), float(hi), bool(lo > 0 or hi < 0))
        for label, e, lo, hi in zip(labels, estimate, lower, upper)
    ]
    return SimultaneousCI(family=family, level=1.0 - alpha, critical_value=d, intervals=intervals)


def pairwise_decisions(
    summary: CellSummaryTable,
    alpha: float = DEFAULT_ALPHA,
    method: CriticalSource = CriticalSource.BOOTSTRAP,
    bootstrap: BootstrapSettings | None = None,
    solver: SolverSettings | None = None,
    factor: str = "A",
    threads: int | None = None,
    mc_draws: int = DEFAULT_MC_DRAWS,
    mc_seed: int = DEFAULT_MC_SEED,
) -> list[PairDecision]:
    """
    Test every treatment pair: reject alpha_i = alpha_i' iff |T_ii'| > d.

    Returns:
        list[PairDecision]: 1-based level pairs in order (1,2), (1,3), ...
    """
    if factor not in ("A", "B"):
        raise InvalidSettings(f"factor must be 'A' or 'B', got {factor!r}")
    oriented = summary.transpose() if factor == "B" else summary
    oriented.require_nondegenerate()
    d = critical_multiplier(
        oriented, StatisticKind.MCT_TREATMENT_A, alpha, method, bootstrap, solver, threads,
        mc_draws, mc_seed,
    )
    estimate, se = treatment_a_contrasts(oriented.mean, oriented.var, oriented.n.astype(float))
    components = estimate / se
    i1, i2 = pairs(oriented.a)
    return [
        PairDecision((int(l) + 1, int(m) + 1), float(t), bool(abs(t) > d))
        for l, m, t in zip(i1, i2, components)
    ]
