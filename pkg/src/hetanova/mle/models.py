"""
Parameter spaces, solver settings and fitted models for hetanova
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from hetanova.utils.config import DEFAULT_EPSILON, DEFAULT_MAX_ITER
from hetanova.utils.errors import InvalidSettings


class ParameterSpace(str, Enum):
    """Which zero-sum and null constraints are active."""

    FULL_OMEGA = "full"
    NULL_NO_INTERACTION = "no_interaction"
    NULL_NO_SIMPLE_A = "no_simple_a"


@dataclass(frozen=True)
class SolverSettings:
    """Tolerance on successive parameter changes and the sweep budget."""

    epsilon: float = DEFAULT_EPSILON
    max_iterations: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidSettings(f"epsilon must be positive, got {self.epsilon}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise InvalidSettings(
                f"max_iterations must be a positive integer, got {self.max_iterations}"
            )

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "max_iterations": int(self.max_iterations)}


@dataclass(frozen=True, eq=False)
class FittedModel:
    """
    Estimates under one parameter space, with solver diagnostics.

    ``zeta`` holds mu + beta_j. For the null spaces ``gamma`` is zero and,
    under NULL_NO_SIMPLE_A, so is ``alpha``.
    """

    space: ParameterSpace
    mu: float
    alpha: np.ndarray
    zeta: np.ndarray
    gamma: np.ndarray
    sigma2: np.ndarray
    loglik: float
    iterations: int = 0
    converged: bool = True
    residuals: dict = field(default_factory=dict)

    @property
    def beta(self) -> np.ndarray:
        return self.zeta - self.mu

    def cell_means(self) -> np.ndarray:
        """Fitted cell means alpha_i + zeta_j + gamma_ij."""
        return self.alpha[:, None] + self.zeta[None, :] + self.gamma

    def diagnostics(self) -> dict:
        return {
            "space": self.space.value,
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "loglik": float(self.loglik),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
        }
