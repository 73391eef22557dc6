"""
Error distributions for simulation studies
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import gamma as gamma_fn

from hetanova.utils.errors import InvalidFamilyParams


class FamilyName(str, Enum):
    NORMAL = "normal"
    NORMAL_MIXTURE = "normal_mixture"
    STUDENT_T = "student_t"
    WEIBULL = "weibull"
    LAPLACE = "laplace"


# Parameter names and defaults for each family
FAMILY_PARAMS = {
    FamilyName.NORMAL: {},
    FamilyName.NORMAL_MIXTURE: {"p": 0.5, "mean1": 1.0, "var1": 2.0, "mean2": 2.0, "var2": 4.0},
    FamilyName.STUDENT_T: {"df": 3.0},
    FamilyName.WEIBULL: {"shape": 5.0, "scale": 1.0},
    FamilyName.LAPLACE: {"location": 0.0, "scale": 5.0},
}


@dataclass(frozen=True)
class ErrorFamily:
    """
    A raw error distribution; draws are standardized to mean 0, variance 1.

    Mixture components are given by mean and variance.
    """

    name: FamilyName = FamilyName.NORMAL
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            name = FamilyName(self.name)
        except ValueError as e:
            known = ", ".join(f.value for f in FamilyName)
            raise InvalidFamilyParams(f"unknown error family {self.name!r}; known: {known}") from e
        unknown = set(self.params) - set(FAMILY_PARAMS[name])
        if unknown:
            raise InvalidFamilyParams(
                f"{name.value} does not take parameter(s) {', '.join(sorted(unknown))}"
            )
        params = {**FAMILY_PARAMS[name], **{k: float(v) for k, v in self.params.items()}}
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "params", params)
        self._validate()

    def _validate(self):
        p = self.params
        if self.name == FamilyName.NORMAL_MIXTURE:
            if not 0 <= p["p"] <= 1:
                raise InvalidFamilyParams(f"mixing proportion must lie in [0, 1], got {p['p']}")
            if p["var1"] <= 0 or p["var2"] <= 0:
                raise InvalidFamilyParams("mixture component variances must be positive")
        elif self.name == FamilyName.STUDENT_T:
            if p["df"] <= 2:
                raise InvalidFamilyParams(
                    f"t errors need df > 2 for a finite variance, got {p['df']}"
                )
        elif self.name == FamilyName.WEIBULL:
            if p["shape"] <= 0 or p["scale"] <= 0:
                raise InvalidFamilyParams("Weibull shape and scale must be positive")
        elif self.name == FamilyName.LAPLACE:
            if p["scale"] <= 0:
                raise InvalidFamilyParams("Laplace scale must be positive")

    def moments(self) -> tuple[float, float]:
        """Analytic (mean, variance) of the raw distribution."""
        p = self.params
        if self.name == FamilyName.NORMAL:
            return 0.0, 1.0
        if self.name == FamilyName.NORMAL_MIXTURE:
            mean = p["p"] * p["mean1"] + (1 - p["p"]) * p["mean2"]
            second = p["p"] * (p["var1"] + p["mean1"] ** 2) + (1 - p["p"]) * (
                p["var2"] + p["mean2"] ** 2
            )
            return mean, second - mean**2
        if self.name == FamilyName.STUDENT_T:
            return 0.0, p["df"] / (p["df"] - 2)
        if self.name == FamilyName.WEIBULL:
            k, scale = p["shape"], p["scale"]
            g1, g2 = gamma_fn(1 + 1 / k), gamma_fn(1 + 2 / k)
            return scale * g1, scale**2 * (g2 - g1**2)
        return p["location"], 2 * p["scale"] ** 2

    def draw(self, gen: np.random.Generator, size: int) -> np.ndarray:
        """Raw draws from the distribution."""
        p = self.params
        if self.name == FamilyName.NORMAL:
            return gen.standard_normal(size)
        if self.name == FamilyName.NORMAL_MIXTURE:
            first = gen.random(size) < p["p"]
            z = gen.standard_normal(size)
            return np.where(
                first,
                p["mean1"] + np.sqrt(p["var1"]) * z,
                p["mean2"] + np.sqrt(p["var2"]) * z,
            )
        if self.name == FamilyName.STUDENT_T:
            return gen.standard_t(p["df"], size)
        if self.name == FamilyName.WEIBULL:
            return p["scale"] * gen.weibull(p["shape"], size)
        return gen.laplace(p["location"], p["scale"], size)

    def standardized(self, gen: np.random.Generator, size: int) -> np.ndarray:
        """Draws with mean 0 and variance 1."""
        mean, var = self.moments()
        return (self.draw(gen, size) - mean) / np.sqrt(var)

    def to_dict(self) -> dict:
        out = {"name": self.name.value, "params": dict(self.params)}
        if self.name == FamilyName.NORMAL_MIXTURE:
            out["parameterization"] = "p, mean1, var1, mean2, var2 (component variances)"
        return out

    @classmethod
    def from_dict(cls, doc) -> "ErrorFamily":
        if doc is None:
            return cls()
        if isinstance(doc, str):
            return cls(name=doc)
        if not isinstance(doc, dict) or "name" not in doc:
            raise InvalidFamilyParams("error_family must be a name or {name, params}")
        return cls(name=doc["name"], params=doc.get("params", {}))
