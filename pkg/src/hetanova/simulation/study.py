"""
Monte Carlo size and power studies for hetanova

Outer replicates are split into chunks and handed to a process pool. Every
replicate draws its data and its inner bootstrap seed from its own index, so
rejection counts do not depend on the chunking or the worker count.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import pandas as pd

from hetanova import __version__
from hetanova.data.summary import summarize
from hetanova.inference.runner import TestRequest, run_test
from hetanova.simulation.generate import SimulationConfig, generate_dataset
from hetanova.utils.config import get_threads
from hetanova.utils.errors import NumericalError
from hetanova.utils.fs import write_json
from hetanova.utils.rng import derive_seed

# Configure logging
logger = logging.getLogger("hetanova")

RESULT_COLUMNS = [
    "config",
    "test",
    "method",
    "c",
    "rejections",
    "reps",
    "proportion",
    "stderr",
    "failures",
]


@dataclass(frozen=True)
class TestTally:
    """Rejection count of one test over the outer replicates that completed."""

    __test__ = False

    request: TestRequest
    rejections: int
    reps: int
    failures: int = 0

    @property
    def proportion(self) -> float:
        return self.rejections / self.reps if self.reps else math.nan

    @property
    def stderr(self) -> float:
        if not self.reps:
            return math.nan
        p = self.proportion
        return math.sqrt(p * (1 - p) / self.reps)


@dataclass(frozen=True, eq=False)
class SimulationResult:
    config: SimulationConfig
    tallies: tuple[TestTally, ...]
    elapsed: float = 0.0

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "config": self.config.id,
                "test": tally.request.target.value,
                "method": tally.request.method.value,
                "c": float(self.config.effect_scale),
                "rejections": tally.rejections,
                "reps": tally.reps,
                "proportion": tally.proportion,
                "stderr": tally.stderr,
                "failures": tally.failures,
            }
            for tally in self.tallies
        ]
        return pd.DataFrame(rows, columns=RESULT_COLUMNS)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "elapsed": round(self.elapsed, 3),
            "results": self.to_frame().to_dict(orient="records"),
        }


def replicate_request(config: SimulationConfig, request: TestRequest, index: int) -> TestRequest:
    """The request for one outer replicate, with its own inner bootstrap seed."""
    if not request.method.uses_bootstrap:
        return request
    seed = derive_seed(config.seed, index)
    return replace(request, bootstrap=replace(request.bootstrap, seed=seed))


def _run_replicates(config: SimulationConfig, start: int, stop: int):
    """
    Worker: score every test on outer replicates [start, stop).

    Returns:
        tuple: (rejections, failures) arrays, one entry per test
    """
    rejections = np.zeros(len(config.tests), dtype=np.int64)
    failures = np.zeros(len(config.tests), dtype=np.int64)
    for index in range(start, stop):
        summary = summarize(generate_dataset(config, index), config.layout)
        for t, request in enumerate(config.tests):
            try:
                report = run_test(
                    summary,
                    replicate_request(config, request, index),
                    threads=1,
                    use_cache=False,
                )
            except NumericalError as e:
                logger.warning(
                    f"{config.id}: replicate {index} failed for {request.method.value}: {e}"
                )
                failures[t] += 1
                continue
            rejections[t] += report.reject
    return rejections, failures


def _chunk_bounds(total: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(total / (workers * 4)))
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def run_study(config: SimulationConfig, threads: int | None = None) -> SimulationResult:
    """
    Estimate rejection proportions of every requested test under one config.

    Asymptotic and classical tests skip the inner bootstrap. Replicates whose
    test raises a numerical error are counted as failures and left out of
    that test's denominator.

    Args:
        config: data-generating setting and tests
        threads: worker processes for outer replicates

    Returns:
        SimulationResult: per-test rejections, proportions and standard errors
    """
    bounds = _chunk_bounds(config.outer_reps, get_threads(threads))
    workers = min(get_threads(threads), len(bounds))
    logger.info(
        f"Simulating {config.id}: {config.outer_reps} outer replicates, "
        f"{len(config.tests)} test(s), {workers} worker(s)"
    )
    began = time.perf_counter()

    if workers == 1:
        parts = [_run_replicates(config, s, e) for s, e in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_replicates, config, s, e) for s, e in bounds]
            parts = [f.result() for f in futures]

    rejections = sum(r for r, _ in parts)
    failures = sum(f for _, f in parts)
    tallies = tuple(
        TestTally(
            request=request,
            rejections=int(rejections[t]),
            reps=int(config.outer_reps - failures[t]),
            failures=int(failures[t]),
        )
        for t, request in enumerate(config.tests)
    )
    elapsed = time.perf_counter() - began
    for tally in tallies:
        logger.info(
            f"{config.id} {tally.request.target.value}/{tally.request.method.value}: "
            f"{tally.proportion:.4f} ({tally.rejections}/{tally.reps}, {tally.failures} failed)"
        )
    return SimulationResult(config=config, tallies=tallies, elapsed=elapsed)


def size_power_grid(configs, output=None, threads: int | None = None) -> pd.DataFrame:
    """
    Run a batch of studies and collect one tidy table.

    Args:
        configs: iterable of SimulationConfig
        output: optional CSV path; a JSON file with the config echo is written next to it
        threads: worker processes per study

    Returns:
        pd.DataFrame: one row per (config, test)
    """
    results = [run_study(config, threads) for config in configs]
    if results:
        table = pd.concat([r.to_frame() for r in results], ignore_index=True)
    else:
        table = pd.DataFrame(columns=RESULT_COLUMNS)

    if output is not None:
        output = Path(output)
        output.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(output, index=False)
        write_json(
            output.with_suffix(".json"),
            {"version": __version__, "studies": [r.to_dict() for r in results]},
        )
        logger.info(f"Wrote {len(table)} result rows to {output}")
    return table
