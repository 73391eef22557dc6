"""
Tests for Monte Carlo size and power studies.
"""

import json
import math
from dataclasses import replace

import pandas as pd
import pytest

from hetanova.simulation import study
from hetanova.simulation.generate import config_from_dict
from hetanova.simulation.presets import load_preset
from hetanova.simulation.study import (
    RESULT_COLUMNS,
    TestTally,
    replicate_request,
    run_study,
    size_power_grid,
)
from hetanova.utils.errors import NonConvergence


def _config(**extra):
    doc = {
        "id": "study",
        "a": 2,
        "b": 2,
        "n": [10, 10, 10, 10],
        "sigma2": [1, 2, 1, 2],
        "outer_reps": 12,
        "inner_reps": 100,
        "seed": 3,
        "mc_draws": 10_000,
        "tests": [
            {"target": "treatmentA", "method": "mct"},
            {"target": "treatmentA", "method": "amct"},
            {"target": "treatmentA", "method": "f"},
        ],
    }
    doc.update(extra)
    return config_from_dict(doc)


def test_tally_proportion():
    """Test the proportion and its binomial standard error."""
    config = _config()
    tally = TestTally(config.tests[0], rejections=5, reps=100)
    assert tally.proportion == 0.05
    assert tally.stderr == pytest.approx(math.sqrt(0.05 * 0.95 / 100))
    empty = TestTally(config.tests[0], rejections=0, reps=0, failures=3)
    assert math.isnan(empty.proportion)
    assert math.isnan(empty.stderr)


def test_inner_seed_depends_on_replicate():
    """Test that bootstrap requests get a per-replicate seed and others are untouched."""
    config = _config()
    first = replicate_request(config, config.tests[0], 0)
    second = replicate_request(config, config.tests[0], 1)
    assert first.bootstrap.seed != second.bootstrap.seed
    assert replicate_request(config, config.tests[0], 0) == first
    assert replicate_request(config, config.tests[2], 0) is config.tests[2]


def test_run_study_is_reproducible():
    """Test that the same config gives the same counts."""
    first = run_study(_config(), threads=1)
    second = run_study(_config(), threads=1)
    assert [t.rejections for t in first.tallies] == [t.rejections for t in second.tallies]
    assert all(t.reps == 12 for t in first.tallies)


def test_worker_count_does_not_change_counts():
    """Test that splitting replicates across processes gives the same counts."""
    config = _config(tests=[{"target": "treatmentA", "method": "f"},
                            {"target": "treatmentA", "method": "amct"}])
    inline = run_study(config, threads=1)
    pooled = run_study(config, threads=2)
    assert [t.rejections for t in inline.tallies] == [t.rejections for t in pooled.tallies]


def test_large_effect_is_detected():
    """Test that a large treatment effect is rejected almost always."""
    result = run_study(_config(alpha=[-1.5, 1.5], c=1.0), threads=1)
    for tally in result.tallies:
        assert tally.proportion >= 0.9


def test_single_replicate_proportion():
    """Test that one outer replicate gives a proportion of 0 or 1."""
    result = run_study(_config(outer_reps=1), threads=1)
    for tally in result.tallies:
        assert tally.proportion in (0.0, 1.0)


def test_failures_leave_the_denominator(monkeypatch):
    """Test that numerical failures are counted and excluded."""
    real = study.run_test

    def failing(summary, request, threads=None, use_cache=True):
        if request.method.value == "f":
            raise NonConvergence("forced")
        return real(summary, request, threads=threads, use_cache=use_cache)

    monkeypatch.setattr(study, "run_test", failing)
    result = run_study(_config(outer_reps=5), threads=1)
    f_tally = result.tallies[2]
    assert f_tally.failures == 5
    assert f_tally.reps == 0
    assert math.isnan(f_tally.proportion)
    assert result.tallies[0].reps == 5


def test_result_frame():
    """Test the tidy result table."""
    frame = run_study(_config(c=0.5), threads=1).to_frame()
    assert list(frame.columns) == RESULT_COLUMNS
    assert list(frame["method"]) == ["mct", "amct", "f"]
    assert (frame["c"] == 0.5).all()


def test_empty_grid():
    """Test that no configs give an empty table with the result columns."""
    table = size_power_grid([])
    assert table.empty
    assert list(table.columns) == RESULT_COLUMNS


def test_grid_writes_csv_and_echo(tmp_path):
    """Test that a grid run writes the table and the config echo."""
    output = tmp_path / "results" / "grid.csv"
    configs = [_config(id="one", outer_reps=3), _config(id="two", outer_reps=3, seed=8)]
    table = size_power_grid(configs, output=output, threads=1)

    assert len(table) == 6
    assert list(pd.read_csv(output)["config"].unique()) == ["one", "two"]
    echo = json.loads(output.with_suffix(".json").read_text())
    assert [s["config"]["id"] for s in echo["studies"]] == ["one", "two"]
    assert echo["studies"][1]["config"]["seed"] == 8


@pytest.mark.slow
def test_bootstrap_size_near_nominal():
    """Test that the max-type bootstrap holds its level under the null."""
    config = _config(
        n=[8, 12, 16, 20], sigma2=[0.5, 3, 1, 6], outer_reps=400, inner_reps=400,
        tests=[{"target": "treatmentA", "method": "mct"}],
    )
    tally = run_study(config).tallies[0]
    assert abs(tally.proportion - 0.05) < 0.035


def _preset(name, outer_reps=2000, inner_reps=1000, seed=7):
    return {config.id: config for config in load_preset(name, outer_reps, inner_reps, seed)}


def _proportions(config):
    return {t.request.method.value: t.proportion for t in run_study(config).tallies}


@pytest.mark.slow
@pytest.mark.parametrize(
    "rho, lrt, mct",
    [
        ("rho1", 0.053, 0.046),
        ("rho2", 0.052, 0.047),
        ("rho3", 0.052, 0.050),
        ("rho4", 0.055, 0.053),
        ("rho5", 0.061, 0.052),
    ],
)
def test_small_cell_sizes(rho, lrt, mct):
    """Test bootstrap sizes with five observations per cell under each variance pattern."""
    config = _preset("table3")[f"table1/config1/N1-{rho}"]
    sizes = _proportions(config)
    assert sizes["lrt"] == pytest.approx(lrt, abs=0.015)
    assert sizes["mct"] == pytest.approx(mct, abs=0.015)


@pytest.mark.slow
def test_asymptotic_sizes_large_cells():
    """Test the asymptotic tests with 25 observations per cell."""
    config = _preset("table4", inner_reps=None)["table1/config2/N5-rho1"]
    asymptotic = [t for t in config.tests if not t.method.uses_bootstrap]
    sizes = _proportions(replace(config, tests=tuple(asymptotic)))
    assert sizes["alrt"] == pytest.approx(0.053, abs=0.015)
    assert sizes["amct"] == pytest.approx(0.054, abs=0.015)


@pytest.mark.slow
@pytest.mark.parametrize(
    "alternative, lrt, mct",
    [("(0,0.4)", 0.732, 0.778), ("(0,0.6)", 0.968, 0.985)],
)
def test_power_under_unequal_variances(alternative, lrt, mct):
    """Test bootstrap power for shifts in the last treatment effect."""
    config = _preset("table5")[f"table5/rho16-N21/alpha={alternative}"]
    powers = _proportions(config)
    assert powers["lrt"] == pytest.approx(lrt, abs=0.03)
    assert powers["mct"] == pytest.approx(mct, abs=0.03)


@pytest.mark.slow
def test_size_under_heavy_tails():
    """Test that Student t errors with three degrees of freedom keep the level."""
    config = _preset("robustness/t3")["robustness/t3"]
    for method, size in _proportions(config).items():
        assert 0.03 <= size <= 0.07, method
