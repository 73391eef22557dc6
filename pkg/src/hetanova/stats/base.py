"""
Statistic kinds and values for hetanova
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Tail(str, Enum):
    """Which tail of the null distribution leads to rejection."""

    LOWER = "lower"
    UPPER = "upper"


class StatisticKind(str, Enum):
    LRT_INTERACTION = "lrt_interaction"
    LRT_SIMPLE_A = "lrt_simple_a"
    LRT_TREATMENT_A = "lrt_treatment_a"
    MCT_INTERACTION = "mct_interaction"
    MCT_SIMPLE_A = "mct_simple_a"
    MCT_TREATMENT_A = "mct_treatment_a"
    CLASSICAL_F_A = "classical_f_a"

    @property
    def is_lrt(self) -> bool:
        return self.name.startswith("LRT_")

    @property
    def is_mct(self) -> bool:
        return self.name.startswith("MCT_")

    @property
    def tail(self) -> Tail:
        """Small likelihood ratios reject; large max-type or F values reject."""
        return Tail.LOWER if self.is_lrt else Tail.UPPER

    def chi2_df(self, a: int, b: int) -> int:
        """Degrees of freedom of the limiting chi-square of -2 log lambda."""
        if self == StatisticKind.LRT_INTERACTION:
            return (a - 1) * (b - 1)
        if self == StatisticKind.LRT_SIMPLE_A:
            return (a - 1) * b
        if self == StatisticKind.LRT_TREATMENT_A:
            return a - 1
        raise ValueError(f"{self.value} has no chi-square limit")


@dataclass(frozen=True, eq=False)
class StatisticValue:
    """
    One observed statistic.

    LRT kinds carry ``log_value`` (log lambda, never positive) because lambda
    itself underflows for large samples. MCT kinds carry the signed contrast
    components in ``detail`` with matching ``labels``.
    """

    kind: StatisticKind
    value: float
    detail: np.ndarray | None = None
    labels: list[str] | None = None
    log_value: float | None = None
    p_value: float | None = None
    df: tuple[int, ...] | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def neg2log(self) -> float | None:
        if self.log_value is None:
            return None
        return -2.0 * self.log_value

    @property
    def reference_value(self) -> float:
        """Value on the scale the bootstrap compares: log lambda for LRTs."""
        return self.log_value if self.kind.is_lrt else self.value

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "value": float(self.value)}
        if self.log_value is not None:
            out["log_value"] = float(self.log_value)
            out["neg2log"] = float(self.neg2log)
        if self.p_value is not None:
            out["p_value"] = float(self.p_value)
        if self.df is not None:
            out["df"] = [int(d) for d in self.df]
        if self.detail is not None:
            out["detail"] = {
                label: float(v) for label, v in zip(self.labels, np.ravel(self.detail))
            }
        return out
