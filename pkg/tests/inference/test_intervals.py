"""
Tests for simultaneous intervals and pairwise decisions.
"""

import numpy as np
import pytest

from hetanova.inference.bootstrap import BootstrapSettings
from hetanova.inference.intervals import (
    CIFamily,
    CriticalSource,
    critical_multiplier,
    pairwise_decisions,
    simultaneous_ci,
)
from hetanova.stats.base import StatisticKind
from hetanova.utils.errors import InvalidSettings, UnsupportedCombination

BOOT = BootstrapSettings(replicates=1000, seed=77)


def test_grades_treatment_intervals(grades):
    """Test which study-time pairs differ on the grade summaries."""
    ci = simultaneous_ci(grades, CIFamily.TREATMENT_A_PAIRS, 0.05, BOOT)

    assert [i.label for i in ci.intervals] == [
        "A1-A2", "A1-A3", "A1-A4", "A2-A3", "A2-A4", "A3-A4",
    ]
    assert {i.label for i in ci.intervals if i.significant} == {"A1-A3", "A2-A3"}
    assert 2.2 < ci.critical_value < 3.2

    by_label = {i.label: i for i in ci.intervals}
    assert by_label["A2-A3"].estimate == pytest.approx(10.52845 - 12.2912, abs=1e-4)
    half = by_label["A2-A3"].upper - by_label["A2-A3"].estimate
    assert half == pytest.approx(ci.critical_value * 0.480208, rel=1e-4)


@pytest.mark.parametrize(
    "label, lower, upper",
    [("A1-A3", -3.2821, -0.1403), ("A2-A3", -3.0339, -0.4916)],
)
def test_grades_treatment_bounds(grades, label, lower, upper):
    """Test the significant study-time intervals against reference bounds."""
    ci = simultaneous_ci(grades, "treatmentA", 0.05, BootstrapSettings(5000, seed=2024))
    interval = {i.label: i for i in ci.intervals}[label]
    assert interval.estimate == pytest.approx((lower + upper) / 2, abs=2e-3)
    assert interval.lower == pytest.approx(lower, abs=0.15)
    assert interval.upper == pytest.approx(upper, abs=0.15)


def test_intervals_are_symmetric(make_summary):
    """Test that every interval is centred on its estimate."""
    ci = simultaneous_ci(make_summary(a=3, b=2), "simpleA", 0.05, BootstrapSettings(200, seed=1))
    for interval in ci.intervals:
        assert interval.estimate - interval.lower == pytest.approx(interval.upper - interval.estimate)
    assert len(ci.intervals) == 3 * 2


def test_lower_confidence_is_narrower(grades):
    """Test that 50% intervals sit inside 95% intervals from the same sample."""
    wide = simultaneous_ci(grades, CIFamily.TREATMENT_A_PAIRS, 0.05, BOOT)
    narrow = simultaneous_ci(grades, CIFamily.TREATMENT_A_PAIRS, 0.5, BOOT)
    assert narrow.critical_value < wide.critical_value
    for outer, inner in zip(wide.intervals, narrow.intervals):
        assert outer.lower < inner.lower <= inner.upper < outer.upper


def test_factor_b_labels(grades):
    """Test that factor-B families are labelled by B levels."""
    treatment = simultaneous_ci(grades, "treatmentB", 0.05, BootstrapSettings(200, seed=3))
    assert treatment.intervals[0].label == "B1-B2"
    simple = simultaneous_ci(grades, "simpleB", 0.05, BootstrapSettings(200, seed=3))
    assert simple.intervals[0].label == "B1-B2|A1"
    assert len(simple.intervals) == 6 * 4


def test_interaction_family_shape(make_summary):
    """Test that interaction intervals enumerate a * b(b-1)/2 contrasts."""
    ci = simultaneous_ci(make_summary(a=2, b=3), "interaction", 0.1, BootstrapSettings(150, seed=0))
    assert len(ci.intervals) == 2 * 3
    assert ci.intervals[0].label == "(1,1)-(1,2)"
    assert ci.level == pytest.approx(0.9)


def test_asymptotic_multiplier(grades):
    """Test the equicoordinate multiplier for treatment pairs."""
    ci = simultaneous_ci(
        grades, "treatmentA", 0.05, source=CriticalSource.ASYMPTOTIC, mc_draws=50_000
    )
    assert 2.3 < ci.critical_value < 2.9
    with pytest.raises(UnsupportedCombination):
        simultaneous_ci(grades, "interaction", 0.05, source="asymptotic")


def test_bootstrap_settings_required(grades):
    """Test that a bootstrap multiplier needs bootstrap settings."""
    with pytest.raises(InvalidSettings):
        critical_multiplier(grades, StatisticKind.MCT_TREATMENT_A, 0.05)
    with pytest.raises(InvalidSettings):
        critical_multiplier(grades, StatisticKind.MCT_TREATMENT_A, 1.5, bootstrap=BOOT)


def test_too_few_replicates_rejected(grades):
    """Test that intervals need as many replicates as any reported test."""
    few = BootstrapSettings(replicates=50, seed=1)
    with pytest.raises(InvalidSettings, match="at least 100"):
        simultaneous_ci(grades, CIFamily.TREATMENT_A_PAIRS, 0.05, few)
    with pytest.raises(InvalidSettings, match="at least 100"):
        critical_multiplier(grades, StatisticKind.MCT_INTERACTION, 0.05, bootstrap=few)


def test_pairwise_decisions_match_intervals(grades):
    """Test that a pair is rejected exactly when its interval excludes zero."""
    ci = simultaneous_ci(grades, CIFamily.TREATMENT_A_PAIRS, 0.05, BOOT)
    decisions = pairwise_decisions(grades, 0.05, bootstrap=BOOT)
    assert [d.pair for d in decisions] == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    assert [d.reject for d in decisions] == [i.significant for i in ci.intervals]
    assert decisions[3].statistic == pytest.approx(-3.6708, abs=1e-3)


def test_pairwise_decisions_factor(grades):
    """Test the factor switch and its validation."""
    decisions = pairwise_decisions(grades, bootstrap=BootstrapSettings(200, seed=4), factor="B")
    assert len(decisions) == 6
    with pytest.raises(InvalidSettings):
        pairwise_decisions(grades, bootstrap=BOOT, factor="C")


def test_csv_and_text_output(grades, tmp_path):
    """Test the tabular renderings."""
    ci = simultaneous_ci(grades, CIFamily.TREATMENT_A_PAIRS, 0.05, BootstrapSettings(200, seed=5))
    text = ci.to_csv()
    assert text.splitlines()[0] == "label,estimate,lower,upper,significant"
    assert len(text.splitlines()) == 7

    path = tmp_path / "ci.csv"
    ci.to_csv(path)
    assert path.read_text() == text
    assert ci.to_text().startswith("95% simultaneous intervals (treatmentA)")
    assert np.isfinite(ci.to_frame()["lower"]).all()
