"""
Large-sample critical values for hetanova
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import linalg, stats

from hetanova.data.summary import CellSummaryTable
from hetanova.inference.bootstrap import quantile_rank
from hetanova.mle.models import SolverSettings
from hetanova.stats.base import StatisticKind, StatisticValue, Tail
from hetanova.stats.dispatch import compute_statistic
from hetanova.stats.mct import pairs
from hetanova.utils.config import DEFAULT_ALPHA, DEFAULT_MC_DRAWS, DEFAULT_MC_SEED
from hetanova.utils.errors import InvalidDF, InvalidSettings, NotPSD
from hetanova.utils.rng import EQUICOORDINATE, substream

# Configure logging
logger = logging.getLogger("hetanova")

# Eigenvalues below -PSD_TOLERANCE * largest count as genuinely negative
PSD_TOLERANCE = 1e-10


class AsymptoticKind(str, Enum):
    ALRT_INTERACTION = "alrt_interaction"
    ALRT_SIMPLE_A = "alrt_simple_a"
    ALRT_TREATMENT_A = "alrt_treatment_a"
    AMCT_TREATMENT_A = "amct_treatment_a"

    @property
    def statistic_kind(self) -> StatisticKind:
        return {
            AsymptoticKind.ALRT_INTERACTION: StatisticKind.LRT_INTERACTION,
            AsymptoticKind.ALRT_SIMPLE_A: StatisticKind.LRT_SIMPLE_A,
            AsymptoticKind.ALRT_TREATMENT_A: StatisticKind.LRT_TREATMENT_A,
            AsymptoticKind.AMCT_TREATMENT_A: StatisticKind.MCT_TREATMENT_A,
        }[self]


@dataclass(frozen=True, eq=False)
class AsymptoticCovariance:
    """Limiting covariance of the scaled row-mean differences and their correlation."""

    q: int
    sigma_z: np.ndarray
    sigma_T: np.ndarray
    tau: np.ndarray
    eta2: np.ndarray


@dataclass(frozen=True, eq=False)
class AsymptoticResult:
    """
    Observed statistic against a large-sample threshold.

    For ALRT kinds ``observed`` and ``critical_value`` are on the -2 log
    lambda scale; for the AMCT they are T and the equicoordinate quantile.
    """

    kind: AsymptoticKind
    statistic: StatisticValue
    observed: float
    critical_value: float
    alpha: float
    p_value: float | None = None
    df: int | None = None

    @property
    def reject(self) -> bool:
        return bool(self.observed > self.critical_value)


def _check_alpha(alpha: float, upper_inclusive: bool = False) -> None:
    if not (0 < alpha < 1 or (upper_inclusive and alpha == 1)):
        raise InvalidSettings(f"alpha must lie in (0, 1), got {alpha}")


def chi_square_critical(df: int, alpha: float = DEFAULT_ALPHA) -> float:
    """Upper-alpha quantile of the chi-square distribution with df degrees of freedom."""
    if int(df) != df or df < 1:
        raise InvalidDF(f"degrees of freedom must be a positive integer, got {df}")
    _check_alpha(alpha, upper_inclusive=True)
    return float(stats.chi2.isf(alpha, int(df)))


def difference_matrix(a: int) -> np.ndarray:
    """q x a matrix with rows e_i - e_i' in pair order (1,2), (1,3), ..., (a-1,a)."""
    i1, i2 = pairs(a)
    A = np.zeros((i1.size, a))
    A[np.arange(i1.size), i1] = 1.0
    A[np.arange(i1.size), i2] = -1.0
    return A


def build_sigma_T(summary: CellSummaryTable) -> AsymptoticCovariance:
    """
    Plug-in covariance of sqrt(N)(Y_i. - Y_i'.) and its correlation matrix.

    The stored unbiased S^2 is the plug-in cell variance.
    """
    summary.require_nondegenerate()
    a, b = summary.layout.shape
    N = summary.layout.N
    eta2 = N / b**2 * (summary.var / summary.n).sum(axis=1)

    A = difference_matrix(a)
    sigma_z = (A * eta2) @ A.T
    sigma_z = 0.5 * (sigma_z + sigma_z.T)
    tau = np.sqrt(np.diag(sigma_z))
    sigma_T = sigma_z / np.outer(tau, tau)
    sigma_T = 0.5 * (sigma_T + sigma_T.T)
    np.fill_diagonal(sigma_T, 1.0)

    return AsymptoticCovariance(
        q=A.shape[0], sigma_z=sigma_z, sigma_T=sigma_T, tau=tau, eta2=eta2
    )


def symmetric_sqrt(matrix: np.ndarray) -> np.ndarray:
    """
    Symmetric square root of a PSD matrix via eigendecomposition.

    Rank-deficient matrices are fine: tiny negative eigenvalues are clipped.
    If a clearly negative eigenvalue shows up, the diagonal is jittered once
    by 1e-12 * trace / q before giving up.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotPSD(f"expected a square matrix, got shape {matrix.shape}")
    if not np.allclose(matrix, matrix.T, atol=1e-12):
        raise NotPSD("matrix is not symmetric")

    q = matrix.shape[0]
    candidate = matrix
    for attempt in range(2):
        try:
            w, V = linalg.eigh(candidate)
        except linalg.LinAlgError as e:
            raise NotPSD(f"eigendecomposition failed: {e}") from e
        floor = -PSD_TOLERANCE * max(np.abs(w).max(), 1.0)
        if w.min() >= floor:
            return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T
        if attempt == 0:
            jitter = 1e-12 * np.trace(matrix) / q
            logger.debug(f"Jittering covariance diagonal by {jitter:.3g}")
            candidate = matrix + jitter * np.eye(q)
    raise NotPSD(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3g})")


def _max_abs_draws(sigma: np.ndarray, mc_draws: int, seed: int) -> np.ndarray:
    root = symmetric_sqrt(sigma)
    gen = substream(seed, domain=EQUICOORDINATE)
    z = gen.standard_normal((mc_draws, root.shape[0]))
    return np.abs(z @ root.T).max(axis=1)


def equicoordinate_quantile(
    cov,
    alpha: float = DEFAULT_ALPHA,
    mc_draws: int = DEFAULT_MC_DRAWS,
    seed: int = DEFAULT_MC_SEED,
) -> float:
    """
    Monte Carlo estimate of d with P(max_k |G_k| <= d) = 1 - alpha.

    Args:
        cov: AsymptoticCovariance (its sigma_T is used) or a correlation matrix
        alpha: significance level
        mc_draws: number of multivariate normal draws
        seed: stream seed; equal seeds give equal quantiles

    Returns:
        float: the equicoordinate two-sided quantile
    """
    _check_alpha(alpha)
    if mc_draws < 1:
        raise InvalidSettings(f"mc_draws must be positive, got {mc_draws}")
    if mc_draws < 10_000:
        logger.warning(f"Equicoordinate quantile from only {mc_draws} draws")
    sigma = cov.sigma_T if isinstance(cov, AsymptoticCovariance) else np.atleast_2d(cov)
    maxima = np.sort(_max_abs_draws(sigma, int(mc_draws), seed))
    return float(maxima[quantile_rank(alpha, maxima.size, Tail.UPPER) - 1])


def asymptotic_test(
    summary: CellSummaryTable,
    kind: AsymptoticKind,
    alpha: float = DEFAULT_ALPHA,
    settings: SolverSettings | None = None,
    mc_draws: int = DEFAULT_MC_DRAWS,
    mc_seed: int = DEFAULT_MC_SEED,
) -> AsymptoticResult:
    """
    Wilks chi-square test for the LRTs, equicoordinate normal test for T.

    Returns:
        AsymptoticResult: observed value, threshold and decision
    """
    kind = AsymptoticKind(kind)
    _check_alpha(alpha)
    statistic = compute_statistic(summary, kind.statistic_kind, settings)

    if kind == AsymptoticKind.AMCT_TREATMENT_A:
        critical = equicoordinate_quantile(build_sigma_T(summary), alpha, mc_draws, mc_seed)
        return AsymptoticResult(
            kind=kind,
            statistic=statistic,
            observed=statistic.value,
            critical_value=critical,
            alpha=alpha,
        )

    df = kind.statistic_kind.chi2_df(summary.a, summary.b)
    return AsymptoticResult(
        kind=kind,
        statistic=statistic,
        observed=statistic.neg2log,
        critical_value=chi_square_critical(df, alpha),
        alpha=alpha,
        p_value=float(stats.chi2.sf(statistic.neg2log, df)),
        df=df,
    )
