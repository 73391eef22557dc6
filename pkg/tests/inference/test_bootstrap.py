"""
Tests for the parametric bootstrap.
"""

import numpy as np
import pytest
from scipy.stats import ks_2samp

from hetanova.data.summary import CellSummaryTable
from hetanova.inference import bootstrap
from hetanova.inference.bootstrap import (
    BootstrapSettings,
    bootstrap_null_sample,
    bootstrap_test,
    empirical_critical,
    empirical_p_value,
    null_reference_sample,
    quantile_rank,
    write_null_sample,
)
from hetanova.mle.models import SolverSettings
from hetanova.stats.base import StatisticKind, Tail
from hetanova.stats.dispatch import batched_statistic
from hetanova.utils.errors import ExcessiveNonConvergence, InvalidSettings


@pytest.mark.parametrize(
    "alpha,replicates,tail,expected",
    [
        (0.05, 2000, Tail.UPPER, 1900),
        (0.05, 2000, Tail.LOWER, 100),
        (0.05, 1000, Tail.LOWER, 50),
        (0.01, 150, Tail.LOWER, 2),
        (0.05, 10, Tail.LOWER, 1),
        (0.95, 5, Tail.UPPER, 1),
    ],
)
def test_quantile_rank(alpha, replicates, tail, expected):
    """Test the ceiling convention for the critical order statistic."""
    assert quantile_rank(alpha, replicates, tail) == expected


def test_empirical_helpers():
    """Test critical values and p-values on a known sample."""
    sample = np.arange(1, 101, dtype=float)
    assert empirical_critical(sample, 0.05, Tail.UPPER) == 95.0
    assert empirical_critical(sample, 0.05, Tail.LOWER) == 5.0
    assert empirical_p_value(sample, 91.0, Tail.UPPER) == pytest.approx(0.10)
    assert empirical_p_value(sample, 3.0, Tail.LOWER) == pytest.approx(0.03)


def test_settings_validation():
    """Test that bad replicate counts, levels and seeds are rejected."""
    with pytest.raises(InvalidSettings):
        BootstrapSettings(replicates=0)
    with pytest.raises(InvalidSettings):
        BootstrapSettings(alpha=1.0)
    with pytest.raises(InvalidSettings):
        BootstrapSettings(seed=-1)


def test_too_few_replicates_for_a_test(grades):
    """Test that a decision needs a minimum number of replicates."""
    with pytest.raises(InvalidSettings, match="at least 100"):
        bootstrap_test(grades, StatisticKind.MCT_TREATMENT_A, BootstrapSettings(replicates=50))


@pytest.mark.parametrize("kind", [StatisticKind.LRT_INTERACTION, StatisticKind.MCT_SIMPLE_A])
def test_thread_count_does_not_change_sample(make_summary, kind):
    """Test that one thread and four threads give the identical null sample."""
    summary = make_summary(a=2, b=3, seed=1)
    settings = BootstrapSettings(replicates=600, seed=42)
    solver = SolverSettings()

    single, _ = null_reference_sample(summary, kind, settings, solver, threads=1, use_cache=False)
    pooled, _ = null_reference_sample(summary, kind, settings, solver, threads=4, use_cache=False)
    np.testing.assert_array_equal(single, pooled)


def test_seed_changes_sample(make_summary):
    """Test that different seeds give different null samples."""
    summary = make_summary(seed=2)
    first = bootstrap_null_sample(summary, "mct_treatment_a", BootstrapSettings(200, seed=1))
    second = bootstrap_null_sample(summary, "mct_treatment_a", BootstrapSettings(200, seed=2))
    assert not np.array_equal(first, second)


def test_lrt_sample_on_lambda_scale(make_summary):
    """Test that LRT null samples are reported as lambda in (0, 1]."""
    sample = bootstrap_null_sample(
        make_summary(a=2, b=2, seed=3), StatisticKind.LRT_TREATMENT_A,
        BootstrapSettings(replicates=200, seed=5),
    )
    assert sample.shape == (200,)
    assert np.all((sample > 0) & (sample <= 1))


def test_cache_reuses_sample(make_summary):
    """Test that a repeated request is served from the cache."""
    summary = make_summary(seed=4)
    settings = BootstrapSettings(replicates=150, seed=9)
    first, _ = null_reference_sample(
        summary, StatisticKind.MCT_INTERACTION, settings, SolverSettings()
    )
    second, _ = null_reference_sample(
        summary, StatisticKind.MCT_INTERACTION, settings, SolverSettings()
    )
    assert first is second
    assert not first.flags.writeable


def test_cache_bypass(make_summary):
    """Test that use_cache=False recomputes an equal sample."""
    summary = make_summary(seed=4)
    settings = BootstrapSettings(replicates=150, seed=9)
    first, _ = null_reference_sample(
        summary, StatisticKind.MCT_INTERACTION, settings, SolverSettings()
    )
    second, _ = null_reference_sample(
        summary, StatisticKind.MCT_INTERACTION, settings, SolverSettings(), use_cache=False
    )
    assert first is not second
    np.testing.assert_array_equal(first, second)


def test_grades_decisions(grades):
    """Test the four bootstrap decisions on the grade summaries."""
    settings = BootstrapSettings(replicates=400, seed=2024)

    interaction = bootstrap_test(grades, StatisticKind.LRT_INTERACTION, settings)
    assert interaction.tail == Tail.LOWER
    assert not interaction.reject
    assert interaction.critical_value < 0.01

    treatment = bootstrap_test(grades, StatisticKind.LRT_TREATMENT_A, settings)
    assert treatment.reject
    assert treatment.observed < treatment.critical_value

    q = bootstrap_test(grades, StatisticKind.MCT_INTERACTION, settings)
    assert not q.reject
    assert q.critical_value > q.observed

    t = bootstrap_test(grades, StatisticKind.MCT_TREATMENT_A, settings)
    assert t.reject
    assert 2.0 < t.critical_value < 3.5
    assert t.p_value < 0.05


def test_critical_at_other_levels(grades):
    """Test that a looser level gives a less extreme threshold from the same sample."""
    result = bootstrap_test(
        grades, StatisticKind.MCT_TREATMENT_A, BootstrapSettings(replicates=300, seed=1)
    )
    assert result.critical_at(0.05) == result.critical_value
    assert result.critical_at(0.5) < result.critical_at(0.05)


def test_excessive_non_convergence(make_summary, monkeypatch):
    """Test that replicates which never converge stop the bootstrap."""

    def never(kind, mean, var, n, solver):
        return np.zeros(mean.shape[0]), np.zeros(mean.shape[0], dtype=bool)

    monkeypatch.setattr(bootstrap, "batched_statistic", never)
    settings = BootstrapSettings(replicates=120, seed=0, max_redraws=2)
    with pytest.raises(ExcessiveNonConvergence, match="after 2 redraws"):
        null_reference_sample(
            make_summary(), StatisticKind.LRT_INTERACTION, settings, SolverSettings()
        )


def test_redraws_are_counted(make_summary, monkeypatch):
    """Test that a replicate failing once is redrawn and counted."""
    real = bootstrap.batched_statistic
    calls = []

    def flaky(kind, mean, var, n, solver):
        values, ok = real(kind, mean, var, n, solver)
        if not calls:
            ok = ok.copy()
            ok[0] = False
        calls.append(mean.shape[0])
        return values, ok

    monkeypatch.setattr(bootstrap, "batched_statistic", flaky)
    settings = BootstrapSettings(replicates=100, seed=0)
    sample, redraws = null_reference_sample(
        make_summary(), StatisticKind.MCT_TREATMENT_A, settings, SolverSettings(), threads=1
    )
    assert redraws == 1
    assert calls == [100, 1]
    assert np.all(np.isfinite(sample))


def test_write_null_sample(tmp_path):
    """Test dumping a null sample to disk."""
    path = tmp_path / "null" / "sample.txt"
    write_null_sample(path, np.array([0.5, 1.5]))
    assert [float(v) for v in path.read_text().split()] == [0.5, 1.5]


def test_cache_is_bounded(make_summary, monkeypatch):
    """Test that the oldest unused sample is evicted first."""
    monkeypatch.setattr(bootstrap, "NULL_CACHE_SIZE", 2)
    settings = BootstrapSettings(replicates=100, seed=3)
    solver = SolverSettings()
    kind = StatisticKind.MCT_TREATMENT_A
    summaries = [make_summary(seed=s) for s in range(3)]

    first, _ = null_reference_sample(summaries[0], kind, settings, solver)
    null_reference_sample(summaries[1], kind, settings, solver)
    again, _ = null_reference_sample(summaries[0], kind, settings, solver)
    assert again is first

    null_reference_sample(summaries[2], kind, settings, solver)
    assert len(bootstrap._null_cache) == 2
    kept = {key[0] for key in bootstrap._null_cache}
    assert kept == {summaries[0].fingerprint, summaries[2].fingerprint}


@pytest.mark.parametrize(
    "kind",
    [StatisticKind.LRT_INTERACTION, StatisticKind.LRT_TREATMENT_A, StatisticKind.MCT_TREATMENT_A],
)
def test_null_sample_ignores_cell_means(make_summary, kind):
    """Test that moving the observed means leaves the null sample unchanged."""
    summary = make_summary(a=3, b=2, seed=8)
    moved = CellSummaryTable.from_arrays(
        summary.mean + np.array([[5.0, -1.0], [0.0, 2.0], [30.0, 7.0]]), summary.n, summary.var
    )
    settings = BootstrapSettings(replicates=150, seed=12)
    first, _ = null_reference_sample(summary, kind, settings, SolverSettings(), use_cache=False)
    second, _ = null_reference_sample(moved, kind, settings, SolverSettings(), use_cache=False)
    np.testing.assert_array_equal(first, second)


@pytest.mark.slow
@pytest.mark.parametrize("kind", [StatisticKind.MCT_TREATMENT_A, StatisticKind.LRT_TREATMENT_A])
def test_null_sample_matches_direct_simulation(kind):
    """Test the bootstrap null against data simulated from the true null model."""
    sigma2 = np.array([[1.0, 4.0], [0.5, 2.0], [3.0, 1.5]])
    n = np.full((3, 2), 100)
    rng = np.random.default_rng(2718)

    def draw_summaries(count):
        means = rng.normal(size=(count, 3, 2)) * np.sqrt(sigma2 / n)
        variances = sigma2 * rng.chisquare(n - 1, size=(count, 3, 2)) / (n - 1)
        return means, variances

    mean, var = draw_summaries(1)
    observed = CellSummaryTable.from_arrays(mean[0] + 10.0, n, var[0])
    sample, _ = null_reference_sample(
        observed, kind, BootstrapSettings(replicates=2000, seed=99), SolverSettings()
    )

    means, variances = draw_summaries(4000)
    direct, ok = batched_statistic(kind, means, variances, n.astype(float), SolverSettings())
    assert ok.all()
    assert ks_2samp(sample, direct).statistic < 0.05
