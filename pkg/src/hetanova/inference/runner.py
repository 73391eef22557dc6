"""
Test orchestration and reports for hetanova
"""

import json
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib.resources import files

import numpy as np

from hetanova import __version__
from hetanova.data.summary import CellSummaryTable
from hetanova.inference.asymptotic import AsymptoticKind, asymptotic_test
from hetanova.inference.bootstrap import BootstrapSettings, bootstrap_test
from hetanova.mle.models import SolverSettings
from hetanova.stats.base import StatisticKind, StatisticValue
from hetanova.stats.classical import classical_F_A
from hetanova.utils.config import DEFAULT_ALPHA, DEFAULT_MC_DRAWS, DEFAULT_MC_SEED
from hetanova.utils.errors import InvalidSettings, UnsupportedCombination

# Configure logging
logger = logging.getLogger("hetanova")

SCHEMA_VERSION = "1.0"


def report_schema() -> dict:
    """The JSON schema that serialized TestReports follow."""
    text = files("hetanova").joinpath("schema", "test_report.schema.json").read_text()
    return json.loads(text)


class Target(str, Enum):
    INTERACTION = "interaction"
    SIMPLE_A = "simpleA"
    SIMPLE_B = "simpleB"
    TREATMENT_A = "treatmentA"
    TREATMENT_B = "treatmentB"

    @property
    def transposed(self) -> bool:
        return self in (Target.SIMPLE_B, Target.TREATMENT_B)

    @property
    def is_treatment(self) -> bool:
        return self in (Target.TREATMENT_A, Target.TREATMENT_B)


class Method(str, Enum):
    LRT_BOOT = "lrt"
    MCT_BOOT = "mct"
    LRT_ASYMPTOTIC = "alrt"
    MCT_ASYMPTOTIC = "amct"
    CLASSICAL_F = "f"

    @property
    def uses_bootstrap(self) -> bool:
        return self in (Method.LRT_BOOT, Method.MCT_BOOT)


class Decision(str, Enum):
    REJECT = "REJECT"
    FAIL_TO_REJECT = "FAIL_TO_REJECT"

    @classmethod
    def of(cls, reject: bool) -> "Decision":
        return cls.REJECT if reject else cls.FAIL_TO_REJECT


_LRT_KIND = {
    Target.INTERACTION: StatisticKind.LRT_INTERACTION,
    Target.SIMPLE_A: StatisticKind.LRT_SIMPLE_A,
    Target.SIMPLE_B: StatisticKind.LRT_SIMPLE_A,
    Target.TREATMENT_A: StatisticKind.LRT_TREATMENT_A,
    Target.TREATMENT_B: StatisticKind.LRT_TREATMENT_A,
}

_MCT_KIND = {
    Target.INTERACTION: StatisticKind.MCT_INTERACTION,
    Target.SIMPLE_A: StatisticKind.MCT_SIMPLE_A,
    Target.SIMPLE_B: StatisticKind.MCT_SIMPLE_A,
    Target.TREATMENT_A: StatisticKind.MCT_TREATMENT_A,
    Target.TREATMENT_B: StatisticKind.MCT_TREATMENT_A,
}

_ALRT_KIND = {
    StatisticKind.LRT_INTERACTION: AsymptoticKind.ALRT_INTERACTION,
    StatisticKind.LRT_SIMPLE_A: AsymptoticKind.ALRT_SIMPLE_A,
    StatisticKind.LRT_TREATMENT_A: AsymptoticKind.ALRT_TREATMENT_A,
}


@dataclass(frozen=True)
class TestRequest:
    """One hypothesis and the way to decide it."""

    __test__ = False

    target: Target
    method: Method
    alpha: float = DEFAULT_ALPHA
    bootstrap: BootstrapSettings = field(default_factory=BootstrapSettings)
    solver: SolverSettings = field(default_factory=SolverSettings)
    mc_draws: int = DEFAULT_MC_DRAWS
    mc_seed: int = DEFAULT_MC_SEED

    def __post_init__(self):
        object.__setattr__(self, "target", Target(self.target))
        object.__setattr__(self, "method", Method(self.method))
        if not 0 < self.alpha < 1:
            raise InvalidSettings(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.method == Method.MCT_ASYMPTOTIC and not self.target.is_treatment:
            raise UnsupportedCombination(
                f"method amct is only defined for treatment targets, not {self.target.value}"
            )
        if self.method == Method.CLASSICAL_F and not self.target.is_treatment:
            raise UnsupportedCombination(
                f"method f is only defined for treatment targets, not {self.target.value}"
            )

    @property
    def statistic_kind(self) -> StatisticKind:
        if self.method == Method.CLASSICAL_F:
            return StatisticKind.CLASSICAL_F_A
        if self.method in (Method.LRT_BOOT, Method.LRT_ASYMPTOTIC):
            return _LRT_KIND[self.target]
        return _MCT_KIND[self.target]

    def to_dict(self) -> dict:
        out = {
            "target": self.target.value,
            "method": self.method.value,
            "alpha": float(self.alpha),
            "solver": self.solver.to_dict(),
            "bootstrap": None,
            "mc_draws": None,
            "mc_seed": None,
        }
        if self.method.uses_bootstrap:
            out["bootstrap"] = replace(self.bootstrap, alpha=self.alpha).to_dict()
        if self.method == Method.MCT_ASYMPTOTIC:
            out["mc_draws"] = int(self.mc_draws)
            out["mc_seed"] = int(self.mc_seed)
        return out


@dataclass(frozen=True, eq=False)
class TestReport:
    """
    Outcome of one test.

    ``scale`` names what ``critical_value`` is compared with: ``lambda`` for
    bootstrap LRTs, ``neg2log`` for Wilks tests, ``statistic`` otherwise.
    """

    __test__ = False

    request: TestRequest
    statistic: StatisticValue
    critical_value: float | None
    p_value: float | None
    decision: Decision
    scale: str
    diagnostics: dict = field(default_factory=dict)
    null_sample: np.ndarray | None = None
    version: str = __version__

    @property
    def reject(self) -> bool:
        return self.decision == Decision.REJECT

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "version": self.version,
            "request": self.request.to_dict(),
            "statistic": self.statistic.to_dict(),
            "critical_value": None if self.critical_value is None else float(self.critical_value),
            "scale": self.scale,
            "p_value": None if self.p_value is None else float(self.p_value),
            "decision": self.decision.value,
            "diagnostics": self.diagnostics,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_text(self) -> str:
        stat = self.statistic
        rows = [
            ("Target", self.request.target.value),
            ("Method", self.request.method.value),
            ("Statistic", f"{stat.kind.value} = {stat.value:.6g}"),
        ]
        if stat.neg2log is not None:
            rows.append(("-2 log lambda", f"{stat.neg2log:.6g}"))
        if stat.df is not None:
            rows.append(("Degrees of freedom", ", ".join(str(d) for d in stat.df)))
        if self.critical_value is not None:
            rows.append((f"Critical value ({self.scale})", f"{self.critical_value:.6g}"))
        if self.p_value is not None:
            rows.append(("p-value", f"{self.p_value:.4g}"))
        rows.append(("alpha", f"{self.request.alpha:g}"))
        rows.append(("Decision", self.decision.value))
        bootstrap = self.diagnostics.get("bootstrap")
        if bootstrap:
            rows.append(
                ("Bootstrap", f"{bootstrap['replicates']} replicates, seed {bootstrap['seed']}, "
                              f"{bootstrap['nonconverged_redraws']} redraws")
            )
        rows.append(("Version", self.version))
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)


def run_test(
    summary: CellSummaryTable,
    request: TestRequest,
    threads: int | None = None,
    use_cache: bool = True,
) -> TestReport:
    """
    Run one hypothesis test end to end.

    Factor-B targets are answered by the factor-A machinery on the
    transposed summary.

    Args:
        summary: observed cell summaries
        request: target, method and settings
        threads: bootstrap worker threads; results do not depend on it
        use_cache: reuse a null sample already drawn for the same summary

    Returns:
        TestReport: statistic, threshold, decision and provenance
    """
    oriented = summary.transpose() if request.target.transposed else summary
    kind = request.statistic_kind
    logger.debug(f"Running {request.method.value} test of {request.target.value}")

    if request.method.uses_bootstrap:
        settings = replace(request.bootstrap, alpha=request.alpha)
        result = bootstrap_test(
            oriented, kind, settings, request.solver, threads, use_cache=use_cache
        )
        diagnostics = {
            "solver": result.statistic.diagnostics,
            "bootstrap": {
                **settings.to_dict(),
                "nonconverged_redraws": int(result.nonconverged_redraws),
            },
        }
        return TestReport(
            request=request,
            statistic=result.statistic,
            critical_value=result.critical_value,
            p_value=result.p_value,
            decision=Decision.of(result.reject),
            scale="lambda" if kind.is_lrt else "statistic",
            diagnostics=diagnostics,
            null_sample=result.null_sample,
        )

    if request.method == Method.CLASSICAL_F:
        statistic = classical_F_A(oriented)
        return TestReport(
            request=request,
            statistic=statistic,
            critical_value=None,
            p_value=statistic.p_value,
            decision=Decision.of(statistic.p_value < request.alpha),
            scale="statistic",
        )

    asymptotic_kind = (
        AsymptoticKind.AMCT_TREATMENT_A
        if request.method == Method.MCT_ASYMPTOTIC
        else _ALRT_KIND[kind]
    )
    result = asymptotic_test(
        oriented, asymptotic_kind, request.alpha, request.solver,
        request.mc_draws, request.mc_seed,
    )
    diagnostics = {"solver": result.statistic.diagnostics}
    if result.df is not None:
        diagnostics["df"] = int(result.df)
    return TestReport(
        request=request,
        statistic=result.statistic,
        critical_value=result.critical_value,
        p_value=result.p_value,
        decision=Decision.of(result.reject),
        scale="neg2log" if kind.is_lrt else "statistic",
        diagnostics=diagnostics,
    )
