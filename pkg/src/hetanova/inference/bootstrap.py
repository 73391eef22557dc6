"""
Parametric bootstrap null distributions for hetanova

Replicate r, attempt k always draws from the counter-based stream
(seed, r, k), and replicates are processed in fixed-size chunks, so a null
sample never depends on how many threads computed it.
"""

import logging
import math
import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from hetanova.data.summary import CellSummaryTable, cell_moments
from hetanova.mle.models import SolverSettings
from hetanova.stats.base import StatisticKind, StatisticValue, Tail
from hetanova.stats.dispatch import batched_statistic, compute_statistic
from hetanova.utils.config import (
    CHUNK_SIZE,
    DEFAULT_ALPHA,
    DEFAULT_BOOT_REPS,
    DEFAULT_MAX_REDRAWS,
    MIN_REPORTED_REPS,
    NULL_CACHE_SIZE,
    get_threads,
)
from hetanova.utils.errors import ExcessiveNonConvergence, InvalidSettings
from hetanova.utils.fs import write_values
from hetanova.utils.rng import BOOTSTRAP, check_seed, substream

# Configure logging
logger = logging.getLogger("hetanova")

# Reference-scale null samples keyed by
# (fingerprint, kind, replicates, seed, max_redraws, solver), least recently used first
_null_cache: OrderedDict = OrderedDict()


@dataclass(frozen=True)
class BootstrapSettings:
    replicates: int = DEFAULT_BOOT_REPS
    alpha: float = DEFAULT_ALPHA
    seed: int = 0
    max_redraws: int = DEFAULT_MAX_REDRAWS

    def __post_init__(self):
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise InvalidSettings(f"replicates must be a positive integer, got {self.replicates}")
        if not 0 < self.alpha < 1:
            raise InvalidSettings(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.max_redraws < 0:
            raise InvalidSettings(f"max_redraws must be nonnegative, got {self.max_redraws}")
        try:
            check_seed(self.seed)
        except (TypeError, ValueError) as e:
            raise InvalidSettings(str(e)) from e

    def to_dict(self) -> dict:
        return {
            "replicates": int(self.replicates),
            "alpha": float(self.alpha),
            "seed": int(self.seed),
            "max_redraws": int(self.max_redraws),
        }


def quantile_rank(alpha: float, replicates: int, tail: Tail) -> int:
    """1-based order statistic used as the critical value (ceiling convention)."""
    level = alpha if tail == Tail.LOWER else 1.0 - alpha
    # round first so that e.g. 0.95 * 2000 is not pushed to 1901 by float error
    rank = math.ceil(round(level * replicates, 9))
    return min(max(rank, 1), replicates)


def empirical_critical(sample: np.ndarray, alpha: float, tail: Tail) -> float:
    ordered = np.sort(sample)
    return float(ordered[quantile_rank(alpha, ordered.size, tail) - 1])


def empirical_p_value(sample: np.ndarray, observed: float, tail: Tail) -> float:
    if tail == Tail.LOWER:
        return float(np.mean(sample <= observed))
    return float(np.mean(sample >= observed))


def require_reported_replicates(settings: BootstrapSettings) -> None:
    """Refuse to report a critical value from too few replicates."""
    if settings.replicates < MIN_REPORTED_REPS:
        raise InvalidSettings(
            f"at least {MIN_REPORTED_REPS} bootstrap replicates are needed, "
            f"got {settings.replicates}"
        )


def rejects(observed: float, critical: float, tail: Tail) -> bool:
    return bool(observed < critical) if tail == Tail.LOWER else bool(observed > critical)


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    """
    Observed statistic against its bootstrap null distribution.

    ``observed``, ``critical_value`` and ``null_sample`` are on the natural
    scale (lambda for LRT kinds); decisions for LRT kinds are made on the
    log scale, where ``reference_sample`` lives.
    """

    statistic_kind: StatisticKind
    observed: float
    critical_value: float
    p_value: float
    tail: Tail
    alpha: float
    reference_sample: np.ndarray
    nonconverged_redraws: int = 0
    statistic: StatisticValue | None = None

    @property
    def null_sample(self) -> np.ndarray:
        if self.statistic_kind.is_lrt:
            return np.exp(self.reference_sample)
        return self.reference_sample

    @property
    def reject(self) -> bool:
        return rejects(self._observed_reference, self.reference_critical(self.alpha), self.tail)

    @property
    def _observed_reference(self) -> float:
        if self.statistic is not None:
            return self.statistic.reference_value
        return math.log(self.observed) if self.statistic_kind.is_lrt else self.observed

    def reference_critical(self, alpha: float) -> float:
        """Critical value on the comparison scale at any level."""
        return empirical_critical(self.reference_sample, alpha, self.tail)

    def critical_at(self, alpha: float) -> float:
        """Critical value on the natural scale at any level, from the same sample."""
        value = self.reference_critical(alpha)
        return math.exp(value) if self.statistic_kind.is_lrt else value


def _observation_sd(summary: CellSummaryTable) -> np.ndarray:
    """Per-observation standard deviation, cells in row-major order."""
    return np.repeat(np.sqrt(summary.var.ravel()), summary.n.ravel())


def _run_chunk(summary, kind, settings, solver, start, stop) -> tuple[np.ndarray, int]:
    a, b = summary.layout.shape
    counts = summary.n.ravel()
    n = summary.n.astype(float)
    sd = _observation_sd(summary)
    total = summary.layout.N

    size = stop - start
    values = np.empty(size)
    attempts = np.zeros(size, dtype=np.int64)
    pending = np.arange(size)

    while pending.size:
        draws = np.stack(
            [
                substream(settings.seed, start + k, attempts[k], BOOTSTRAP).standard_normal(total)
                for k in pending
            ]
        )
        means, variances = cell_moments(draws * sd, counts)
        batch_values, ok = batched_statistic(
            kind,
            means.reshape(-1, a, b),
            variances.reshape(-1, a, b),
            n,
            solver,
        )
        values[pending[ok]] = batch_values[ok]
        failed = pending[~ok]
        if failed.size:
            attempts[failed] += 1
            worst = int(attempts[failed].max())
            logger.warning(
                f"Redrawing {failed.size} non-converged replicate(s) in chunk at {start}"
            )
            if worst > settings.max_redraws:
                replicate = start + int(failed[np.argmax(attempts[failed])])
                raise ExcessiveNonConvergence(
                    f"replicate {replicate} failed to converge after "
                    f"{settings.max_redraws} redraws"
                )
        pending = failed

    logger.debug(f"Bootstrap chunk {start}-{stop} done")
    return values, int(attempts.sum())


def null_reference_sample(
    summary: CellSummaryTable,
    kind: StatisticKind,
    settings: BootstrapSettings,
    solver: SolverSettings,
    threads: int | None = None,
    use_cache: bool = True,
) -> tuple[np.ndarray, int]:
    """Null sample on the comparison scale plus the redraw count."""
    kind = StatisticKind(kind)
    summary.require_nondegenerate()
    key = (
        summary.fingerprint,
        kind,
        int(settings.replicates),
        int(settings.seed),
        int(settings.max_redraws),
        solver,
    )
    if use_cache and key in _null_cache:
        logger.debug(f"Using cached {kind.value} null sample")
        _null_cache.move_to_end(key)
        return _null_cache[key]

    starts = range(0, settings.replicates, CHUNK_SIZE)
    bounds = [(s, min(s + CHUNK_SIZE, settings.replicates)) for s in starts]
    workers = min(get_threads(threads), len(bounds))

    logger.debug(
        f"Bootstrapping {kind.value}: {settings.replicates} replicates, "
        f"seed {settings.seed}, {workers} thread(s)"
    )
    began = time.perf_counter()
    if workers == 1:
        results = [_run_chunk(summary, kind, settings, solver, s, e) for s, e in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_chunk, summary, kind, settings, solver, s, e) for s, e in bounds
            ]
            results = [f.result() for f in futures]

    sample = np.concatenate([values for values, _ in results])
    redraws = sum(count for _, count in results)
    sample.setflags(write=False)
    logger.info(
        f"Bootstrap {kind.value}: {settings.replicates} replicates in "
        f"{time.perf_counter() - began:.2f}s ({redraws} redraws)"
    )

    if use_cache:
        _null_cache[key] = (sample, redraws)
        while len(_null_cache) > NULL_CACHE_SIZE:
            _null_cache.popitem(last=False)
    return sample, redraws


def bootstrap_null_sample(
    summary: CellSummaryTable,
    kind: StatisticKind,
    settings: BootstrapSettings,
    solver: SolverSettings | None = None,
    threads: int | None = None,
) -> np.ndarray:
    """
    Simulate the statistic under the fitted parametric null.

    Each replicate draws mean-zero normals with the cell's unbiased variance,
    summarizes them and recomputes the statistic. Only n_ij and S^2_ij enter.

    Args:
        summary: observed cell summaries
        kind: statistic to simulate
        settings: replicate count, level, seed and redraw budget
        solver: fixed-point settings for LRT kinds
        threads: worker threads; results do not depend on it

    Returns:
        np.ndarray: ``settings.replicates`` values (lambda scale for LRTs)
    """
    kind = StatisticKind(kind)
    solver = solver or SolverSettings()
    sample, _ = null_reference_sample(summary, kind, settings, solver, threads)
    return np.exp(sample) if kind.is_lrt else sample.copy()


def bootstrap_test(
    summary: CellSummaryTable,
    kind: StatisticKind,
    settings: BootstrapSettings,
    solver: SolverSettings | None = None,
    threads: int | None = None,
    use_cache: bool = True,
) -> BootstrapResult:
    """
    Compare the observed statistic with its bootstrap null distribution.

    Returns:
        BootstrapResult: critical value, p-value and decision material
    """
    kind = StatisticKind(kind)
    solver = solver or SolverSettings()
    require_reported_replicates(settings)

    observed = compute_statistic(summary, kind, solver)
    sample, redraws = null_reference_sample(summary, kind, settings, solver, threads, use_cache)
    tail = kind.tail
    reference_critical = empirical_critical(sample, settings.alpha, tail)
    critical = math.exp(reference_critical) if kind.is_lrt else reference_critical

    return BootstrapResult(
        statistic_kind=kind,
        observed=observed.value,
        critical_value=critical,
        p_value=empirical_p_value(sample, observed.reference_value, tail),
        tail=tail,
        alpha=settings.alpha,
        reference_sample=sample,
        nonconverged_redraws=redraws,
        statistic=observed,
    )


def write_null_sample(path, sample) -> None:
    """Dump a null sample, one value per line."""
    write_values(path, sample)


def clear_cache() -> None:
    _null_cache.clear()
