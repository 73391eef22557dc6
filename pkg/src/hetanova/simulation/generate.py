"""
Simulation configurations and data generation for hetanova
"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from hetanova.data.summary import Layout, RawDataset
from hetanova.inference.bootstrap import BootstrapSettings
from hetanova.inference.runner import Method, Target, TestRequest
from hetanova.mle.models import SolverSettings
from hetanova.simulation.families import ErrorFamily
from hetanova.utils.config import (
    DEFAULT_ALPHA,
    DEFAULT_INNER_REPS,
    DEFAULT_MC_DRAWS,
    DEFAULT_OUTER_REPS,
    MIN_OUTER_REPS,
    MIN_REPORTED_REPS,
)
from hetanova.utils.errors import HetAnovaError, InvalidConfig
from hetanova.utils.rng import OUTER, check_seed, substream

# Configure logging
logger = logging.getLogger("hetanova")

DEFAULT_TESTS = (("treatmentA", "lrt"), ("treatmentA", "mct"))


@dataclass(frozen=True, eq=False)
class SimulationConfig:
    """
    One data-generating setting and the tests to score on it.

    Cell means are mu + c * alpha_i + beta_j + gamma_ij.
    """

    id: str
    layout: Layout
    mu: float
    alpha_vec: np.ndarray
    beta_vec: np.ndarray
    gamma: np.ndarray
    sigma2: np.ndarray
    effect_scale: float = 0.0
    error_family: ErrorFamily = field(default_factory=ErrorFamily)
    outer_reps: int = DEFAULT_OUTER_REPS
    inner_reps: int = DEFAULT_INNER_REPS
    tests: tuple[TestRequest, ...] = ()
    nominal_alpha: float = DEFAULT_ALPHA
    seed: int = 0
    solver: SolverSettings = field(default_factory=SolverSettings)
    mc_draws: int = DEFAULT_MC_DRAWS

    def __post_init__(self):
        a, b = self.layout.shape
        for name, shape in (
            ("alpha_vec", (a,)),
            ("beta_vec", (b,)),
            ("gamma", (a, b)),
            ("sigma2", (a, b)),
        ):
            value = np.asarray(getattr(self, name), dtype=float)
            if value.shape != shape:
                raise InvalidConfig(
                    f"{self.id}: {name} has shape {value.shape}, layout needs {shape}"
                )
            object.__setattr__(self, name, value)
        if np.any(self.sigma2 <= 0):
            raise InvalidConfig(f"{self.id}: sigma2 must be positive in every cell")
        if not (
            np.allclose(self.gamma.sum(axis=0), 0, atol=1e-9)
            and np.allclose(self.gamma.sum(axis=1), 0, atol=1e-9)
        ):
            raise InvalidConfig(f"{self.id}: gamma must sum to zero over every row and column")
        if self.outer_reps < 1 or self.inner_reps < 1:
            raise InvalidConfig(f"{self.id}: outer_reps and inner_reps must be positive")
        if not 0 < self.nominal_alpha < 1:
            raise InvalidConfig(f"{self.id}: nominal_alpha must lie in (0, 1)")
        try:
            check_seed(self.seed)
        except (TypeError, ValueError) as e:
            raise InvalidConfig(f"{self.id}: {e}") from e
        if not self.tests:
            object.__setattr__(self, "tests", self.requests(DEFAULT_TESTS))
        if self.inner_reps < MIN_REPORTED_REPS and any(
            t.method.uses_bootstrap for t in self.tests
        ):
            raise InvalidConfig(
                f"{self.id}: inner_reps must be at least {MIN_REPORTED_REPS} "
                f"for bootstrap tests, got {self.inner_reps}"
            )
        if self.outer_reps < MIN_OUTER_REPS:
            logger.warning(
                f"{self.id}: only {self.outer_reps} outer replicates; proportions will be noisy"
            )

    def requests(self, pairs, inner_reps: int | None = None) -> tuple[TestRequest, ...]:
        """Build TestRequests for (target, method) pairs under this config's settings."""
        inner_reps = inner_reps or self.inner_reps
        return tuple(
            TestRequest(
                target=Target(target),
                method=Method(method),
                alpha=self.nominal_alpha,
                bootstrap=BootstrapSettings(replicates=inner_reps, alpha=self.nominal_alpha),
                solver=self.solver,
                mc_draws=self.mc_draws,
            )
            for target, method in pairs
        )

    def cell_means(self) -> np.ndarray:
        return (
            self.mu
            + self.effect_scale * self.alpha_vec[:, None]
            + self.beta_vec[None, :]
            + self.gamma
        )

    def with_overrides(self, outer_reps=None, inner_reps=None, seed=None) -> "SimulationConfig":
        """Copy with CLI-style overrides; tests are rebuilt for a new inner count."""
        changes = {}
        if outer_reps is not None:
            changes["outer_reps"] = int(outer_reps)
        if seed is not None:
            changes["seed"] = int(seed)
        if inner_reps is not None:
            changes["inner_reps"] = int(inner_reps)
            pairs = [(t.target.value, t.method.value) for t in self.tests]
            changes["tests"] = self.requests(pairs, inner_reps=int(inner_reps))
        return replace(self, **changes) if changes else self

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "a": self.layout.a,
            "b": self.layout.b,
            "n": self.layout.n.tolist(),
            "mu": float(self.mu),
            "alpha": self.alpha_vec.tolist(),
            "beta": self.beta_vec.tolist(),
            "gamma": self.gamma.tolist(),
            "sigma2": self.sigma2.tolist(),
            "c": float(self.effect_scale),
            "error_family": self.error_family.to_dict(),
            "outer_reps": int(self.outer_reps),
            "inner_reps": int(self.inner_reps),
            "seed": int(self.seed),
            "nominal_alpha": float(self.nominal_alpha),
            "tests": [{"target": t.target.value, "method": t.method.value} for t in self.tests],
        }


def _grid(doc, key, a, b, default=None) -> np.ndarray:
    """Accept an a x b nested list or a flat row-major vector."""
    if key not in doc:
        if default is None:
            raise InvalidConfig(f"config {doc.get('id', '?')} is missing {key!r}")
        return np.full((a, b), float(default))
    value = np.asarray(doc[key], dtype=float)
    if value.size != a * b:
        raise InvalidConfig(
            f"config {doc.get('id', '?')}: {key} has {value.size} entries, need {a * b}"
        )
    return value.reshape(a, b)


def config_from_dict(doc: dict) -> SimulationConfig:
    """
    Parse one configuration document.

    Keys: id, a, b, n, sigma2 (a x b or flat row-major), mu, alpha, beta,
    gamma, c, error_family, outer_reps, inner_reps, seed, nominal_alpha,
    tests [{target, method}].
    """
    if not isinstance(doc, dict):
        raise InvalidConfig("a simulation config must be a JSON object")
    try:
        a, b = int(doc["a"]), int(doc["b"])
        n = _grid(doc, "n", a, b)
        sigma2 = _grid(doc, "sigma2", a, b)
        gamma = _grid(doc, "gamma", a, b, default=0.0)
        nominal_alpha = float(doc.get("nominal_alpha", DEFAULT_ALPHA))
        base = SimulationConfig(
            id=str(doc.get("id", "config")),
            layout=Layout(a=a, b=b, n=n),
            mu=float(doc.get("mu", 0.0)),
            alpha_vec=np.asarray(doc.get("alpha", [0.0] * a), dtype=float),
            beta_vec=np.asarray(doc.get("beta", [0.0] * b), dtype=float),
            gamma=gamma,
            sigma2=sigma2,
            effect_scale=float(doc.get("c", 0.0)),
            error_family=ErrorFamily.from_dict(doc.get("error_family")),
            outer_reps=int(doc.get("outer_reps", DEFAULT_OUTER_REPS)),
            inner_reps=int(doc.get("inner_reps", DEFAULT_INNER_REPS)),
            nominal_alpha=nominal_alpha,
            seed=int(doc.get("seed", 0)),
            mc_draws=int(doc.get("mc_draws", DEFAULT_MC_DRAWS)),
        )
        tests = doc.get("tests")
        if tests:
            pairs = [(t["target"], t["method"]) for t in tests]
            return replace(base, tests=base.requests(pairs))
        return base
    except KeyError as e:
        raise InvalidConfig(f"config {doc.get('id', '?')} is missing {e.args[0]!r}") from e
    except InvalidConfig:
        raise
    except HetAnovaError as e:
        raise InvalidConfig(f"config {doc.get('id', '?')}: {e}") from e
    except (TypeError, ValueError) as e:
        raise InvalidConfig(f"config {doc.get('id', '?')}: {e}") from e


def generate_dataset(config: SimulationConfig, replicate_index: int) -> RawDataset:
    """
    Draw one data set: Y = mu_ij + sigma_ij * standardized error.

    Deterministic given (config.seed, replicate_index).
    """
    a, b = config.layout.shape
    counts = config.layout.n.ravel()
    gen = substream(config.seed, replicate_index, domain=OUTER)

    errors = config.error_family.standardized(gen, int(counts.sum()))
    location = np.repeat(config.cell_means().ravel(), counts)
    scale = np.repeat(np.sqrt(config.sigma2.ravel()), counts)
    cells = np.repeat(np.arange(a * b), counts)
    return RawDataset(level_a=cells // b + 1, level_b=cells % b + 1, y=location + scale * errors)
