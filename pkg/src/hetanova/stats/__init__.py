"""
Test statistics for hetanova
"""

from hetanova.stats.base import StatisticKind, StatisticValue, Tail
from hetanova.stats.classical import classical_F_A
from hetanova.stats.dispatch import batched_statistic, compute_statistic
from hetanova.stats.lrt import lrt_interaction, lrt_simple_A, lrt_treatment_A
from hetanova.stats.mct import mct_interaction, mct_simple_A, mct_treatment_A

__all__ = [
    "StatisticKind",
    "StatisticValue",
    "Tail",
    "batched_statistic",
    "classical_F_A",
    "compute_statistic",
    "lrt_interaction",
    "lrt_simple_A",
    "lrt_treatment_A",
    "mct_interaction",
    "mct_simple_A",
    "mct_treatment_A",
]
