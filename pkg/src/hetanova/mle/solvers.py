"""
Maximum-likelihood fits under the full and constrained spaces

The two constrained solvers are coordinate-ascent fixed-point iterations.
Their cores take arrays with arbitrary leading batch axes, so a single call
can fit every bootstrap replicate of a chunk. A replicate stops moving the
sweep after it meets the tolerance, which keeps its trajectory identical to
a stand-alone fit.
"""

import logging
from dataclasses import replace
from typing import Callable, NamedTuple

import numpy as np

from hetanova.data.summary import CellSummaryTable
from hetanova.mle.models import FittedModel, ParameterSpace, SolverSettings
from hetanova.utils.errors import DimensionMismatch, NonConvergence, SingularSystem

# Configure logging
logger = logging.getLogger("hetanova")

_LOG_2PI = np.log(2.0 * np.pi)

# Log-likelihood gain the no-simple-A start needs to win; ties go to the row-mean start
_START_MARGIN = 1e-10


class FixedPointState(NamedTuple):
    """Final iterate of a (possibly batched) fixed-point solve."""

    alpha: np.ndarray
    zeta: np.ndarray
    sigma2: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray


def biased_variance(var: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Full-model MLE ((n-1)/n) S^2 from the stored unbiased S^2."""
    return (n - 1) / n * var


def sherman_morrison_solve(w: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solve (diag(w_1..w_{a-1}) + w_a 11^T) x = rhs in closed form.

    Args:
        w: positive row weights, shape (..., a)
        rhs: right-hand side, shape (..., a-1)

    Returns:
        np.ndarray: solution of shape (..., a-1)
    """
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise SingularSystem("row weights must be finite and positive")
    d = w[..., :-1]
    c = w[..., -1:]
    x = rhs / d
    scale = c * x.sum(axis=-1, keepdims=True) / (1.0 + c * (1.0 / d).sum(axis=-1, keepdims=True))
    return x - scale / d


def _alpha_step(mean, zeta, sigma2, n):
    """Exact conditional maximizer in alpha under sum(alpha) = 0."""
    u = n / sigma2
    w = u.sum(axis=-1)
    r = (u * (mean - zeta[..., None, :])).sum(axis=-1)
    rhs = r[..., :-1] - r[..., -1:]
    head = sherman_morrison_solve(w, rhs)
    return np.concatenate([head, -head.sum(axis=-1, keepdims=True)], axis=-1)


def _zeta_step(mean, alpha, sigma2, n):
    """Precision-weighted column means of the alpha-adjusted cell means."""
    u = n / sigma2
    return (u * (mean - alpha[..., :, None])).sum(axis=-2) / u.sum(axis=-2)


def _sigma2_step(mean, var, alpha, zeta, n):
    return biased_variance(var, n) + (mean - alpha[..., :, None] - zeta[..., None, :]) ** 2


def solve_no_interaction(
    mean: np.ndarray,
    var: np.ndarray,
    n: np.ndarray,
    settings: SolverSettings,
    callback: Callable | None = None,
    start: tuple | None = None,
) -> FixedPointState:
    """
    Batched fixed point for the additive (no-interaction) model.

    Args:
        mean: cell means, shape (..., a, b)
        var: unbiased cell variances, same shape
        n: cell sizes, shape (a, b)
        settings: tolerance and sweep budget
        callback: called as callback(m, alpha, zeta, sigma2) after sweep m
        start: optional (alpha, zeta, sigma2) to iterate from; alpha must
            sum to zero. Defaults to row means and centered column means.

    Returns:
        FixedPointState: final iterate and per-replicate diagnostics
    """
    batch = mean.shape[:-2]
    if start is None:
        alpha = mean.mean(axis=-1)
        zeta = mean.mean(axis=-2)
        zeta = zeta - zeta.mean(axis=-1, keepdims=True)
        sigma2 = biased_variance(var, n) * np.ones_like(mean)
    else:
        alpha, zeta, sigma2 = (np.array(x, dtype=float) for x in start)
    converged = np.zeros(batch, dtype=bool)
    iterations = np.zeros(batch, dtype=np.int64)

    for m in range(1, settings.max_iterations + 1):
        new_alpha = _alpha_step(mean, zeta, sigma2, n)
        new_zeta = _zeta_step(mean, new_alpha, sigma2, n)
        new_sigma2 = _sigma2_step(mean, var, new_alpha, new_zeta, n)

        change = np.maximum(
            np.abs(new_alpha - alpha).max(axis=-1), np.abs(new_zeta - zeta).max(axis=-1)
        )
        active = ~converged
        alpha = np.where(active[..., None], new_alpha, alpha)
        zeta = np.where(active[..., None], new_zeta, zeta)
        sigma2 = np.where(active[..., None, None], new_sigma2, sigma2)
        iterations = np.where(active, m, iterations)
        converged = converged | (active & (change <= settings.epsilon))

        if callback is not None:
            callback(m, alpha, zeta, sigma2)
        if converged.all():
            break

    return FixedPointState(alpha, zeta, sigma2, iterations, converged)


def solve_no_simple_a(
    mean: np.ndarray,
    var: np.ndarray,
    n: np.ndarray,
    settings: SolverSettings,
    callback: Callable | None = None,
) -> FixedPointState:
    """Batched fixed point for the model with no factor-A simple effects."""
    batch = mean.shape[:-2]
    zeta = mean.mean(axis=-2)
    sigma2 = biased_variance(var, n) * np.ones_like(mean)
    alpha = np.zeros(mean.shape[:-1])
    converged = np.zeros(batch, dtype=bool)
    iterations = np.zeros(batch, dtype=np.int64)

    for m in range(1, settings.max_iterations + 1):
        new_zeta = _zeta_step(mean, alpha, sigma2, n)
        new_sigma2 = _sigma2_step(mean, var, alpha, new_zeta, n)

        change = np.abs(new_zeta - zeta).max(axis=-1)
        active = ~converged
        zeta = np.where(active[..., None], new_zeta, zeta)
        sigma2 = np.where(active[..., None, None], new_sigma2, sigma2)
        iterations = np.where(active, m, iterations)
        converged = converged | (active & (change <= settings.epsilon))

        if callback is not None:
            callback(m, alpha, zeta, sigma2)
        if converged.all():
            break

    return FixedPointState(alpha, zeta, sigma2, iterations, converged)


def gaussian_loglik(mean, var, n, fitted_mean, sigma2) -> np.ndarray:
    """Sufficient-statistic Gaussian log-likelihood, batched over leading axes."""
    rss = (n - 1) * var + n * (mean - fitted_mean) ** 2
    terms = 0.5 * n * np.log(sigma2) + rss / (2.0 * sigma2)
    return -terms.sum(axis=(-2, -1)) - 0.5 * n.sum() * _LOG_2PI


def state_loglik(mean, var, n, state: FixedPointState) -> np.ndarray:
    fitted = state.alpha[..., :, None] + state.zeta[..., None, :]
    return gaussian_loglik(mean, var, n, fitted, state.sigma2)


def solve_additive(
    mean: np.ndarray,
    var: np.ndarray,
    n: np.ndarray,
    settings: SolverSettings,
    null: FixedPointState | None = None,
    callback: Callable | None = None,
) -> FixedPointState:
    """
    Additive-model fit from two starts, keeping the higher likelihood.

    The likelihood can have several local maxima. The second start is the
    no-simple-A fit (alpha = 0), which lies inside the additive space, and
    coordinate ascent never lowers the likelihood, so the result never
    scores more than _START_MARGIN below that fit.

    Args:
        mean, var, n: as for solve_no_interaction
        settings: tolerance and sweep budget
        null: solve_no_simple_a state for the same data, computed if omitted
        callback: traces the row-mean start only

    Returns:
        FixedPointState: per replicate, whichever run ended higher
    """
    if null is None:
        null = solve_no_simple_a(mean, var, n, settings)
    plain = solve_no_interaction(mean, var, n, settings, callback)
    warm = solve_no_interaction(
        mean, var, n, settings, start=(np.zeros_like(null.alpha), null.zeta, null.sigma2)
    )

    better = state_loglik(mean, var, n, warm) > state_loglik(mean, var, n, plain) + _START_MARGIN
    if np.any(better):
        logger.debug(f"No-simple-A start improved {int(np.sum(better))} additive fit(s)")
    return FixedPointState(
        alpha=np.where(better[..., None], warm.alpha, plain.alpha),
        zeta=np.where(better[..., None], warm.zeta, plain.zeta),
        sigma2=np.where(better[..., None, None], warm.sigma2, plain.sigma2),
        iterations=np.where(better, warm.iterations, plain.iterations),
        converged=np.where(better, warm.converged, plain.converged),
    )


def log_likelihood(summary: CellSummaryTable, model: FittedModel) -> float:
    """
    Gaussian log-likelihood of the summaries at the model's parameters.

    Args:
        summary: observed cell summaries
        model: fitted or hand-built model on the same layout

    Returns:
        float: log-likelihood including the -(N/2) ln(2 pi) constant
    """
    fitted = model.cell_means()
    if fitted.shape != summary.layout.shape or model.sigma2.shape != summary.layout.shape:
        raise DimensionMismatch(
            f"dimension mismatch: model is {fitted.shape[0]}x{fitted.shape[1]}, "
            f"summary is {summary.a}x{summary.b}"
        )
    n = summary.n.astype(float)
    return float(gaussian_loglik(summary.mean, summary.var, n, fitted, model.sigma2))


def stationarity_residuals(summary: CellSummaryTable, model: FittedModel) -> dict:
    """
    Re-apply each fixed-point equation at the model's estimates.

    Returns:
        dict: equation name -> max absolute change it would make
    """
    mean, var = summary.mean, summary.var
    n = summary.n.astype(float)
    alpha, zeta, sigma2 = model.alpha, model.zeta, model.sigma2

    residuals = {}
    if model.space == ParameterSpace.NULL_NO_INTERACTION:
        residuals["alpha"] = np.abs(_alpha_step(mean, zeta, sigma2, n) - alpha).max()
    if model.space in (ParameterSpace.NULL_NO_INTERACTION, ParameterSpace.NULL_NO_SIMPLE_A):
        residuals["zeta"] = np.abs(_zeta_step(mean, alpha, sigma2, n) - zeta).max()
    fitted = model.cell_means()
    residuals["sigma2"] = np.abs(biased_variance(var, n) + (mean - fitted) ** 2 - sigma2).max()
    return {k: float(v) for k, v in residuals.items()}


def fit_full(summary: CellSummaryTable) -> FittedModel:
    """Closed-form MLE under the unrestricted cell-means model."""
    summary.require_nondegenerate()
    row, col, grand = summary.marginals()
    n = summary.n.astype(float)
    alpha = row - grand
    gamma = summary.mean - row[:, None] - col[None, :] + grand
    sigma2 = biased_variance(summary.var, n)
    loglik = gaussian_loglik(summary.mean, summary.var, n, summary.mean, sigma2)
    return FittedModel(
        space=ParameterSpace.FULL_OMEGA,
        mu=grand,
        alpha=alpha,
        zeta=col,
        gamma=gamma,
        sigma2=sigma2,
        loglik=float(loglik),
    )


def _finish(summary, space, state, settings, require_converged, label) -> FittedModel:
    converged = bool(state.converged)
    iterations = int(state.iterations)
    zeta = np.asarray(state.zeta)
    gamma = np.zeros(summary.layout.shape)
    model = FittedModel(
        space=space,
        mu=float(zeta.mean()),
        alpha=np.asarray(state.alpha),
        zeta=zeta,
        gamma=gamma,
        sigma2=np.asarray(state.sigma2),
        loglik=float(
            gaussian_loglik(
                summary.mean,
                summary.var,
                summary.n.astype(float),
                np.asarray(state.alpha)[:, None] + zeta[None, :],
                state.sigma2,
            )
        ),
        iterations=iterations,
        converged=converged,
    )
    model = replace(model, residuals=stationarity_residuals(summary, model))

    if converged:
        logger.debug(f"{label} solver converged after {iterations} iterations")
    else:
        message = f"{label} solver did not converge in {settings.max_iterations} iterations"
        if require_converged:
            raise NonConvergence(message)
        logger.warning(message)
    return model


def fit_null_no_interaction(
    summary: CellSummaryTable,
    settings: SolverSettings | None = None,
    callback: Callable | None = None,
    require_converged: bool = False,
    null: FittedModel | None = None,
) -> FittedModel:
    """
    MLE under the additive model (all gamma_ij = 0).

    Args:
        summary: observed cell summaries
        settings: tolerance and sweep budget
        callback: optional per-sweep hook callback(m, alpha, zeta, sigma2),
            called for the row-mean start
        require_converged: raise NonConvergence instead of returning
            a model flagged converged=False
        null: fit_null_no_simple_A result to reuse as the second start

    Returns:
        FittedModel: estimates with iteration count and residuals
    """
    settings = settings or SolverSettings()
    summary.require_nondegenerate()
    n = summary.n.astype(float)
    if null is None:
        null_state = solve_no_simple_a(summary.mean, summary.var, n, settings)
    else:
        null_state = FixedPointState(
            null.alpha, null.zeta, null.sigma2, np.int64(null.iterations), np.bool_(null.converged)
        )
    state = solve_additive(summary.mean, summary.var, n, settings, null_state, callback)
    return _finish(
        summary, ParameterSpace.NULL_NO_INTERACTION, state, settings, require_converged,
        "No-interaction",
    )


def fit_null_no_simple_A(
    summary: CellSummaryTable,
    settings: SolverSettings | None = None,
    callback: Callable | None = None,
    require_converged: bool = False,
) -> FittedModel:
    """MLE when factor A has no effect at any level of B (alpha = gamma = 0)."""
    settings = settings or SolverSettings()
    summary.require_nondegenerate()
    state = solve_no_simple_a(
        summary.mean, summary.var, summary.n.astype(float), settings, callback
    )
    return _finish(
        summary, ParameterSpace.NULL_NO_SIMPLE_A, state, settings, require_converged,
        "No-simple-A",
    )
