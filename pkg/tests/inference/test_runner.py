"""
Tests for test orchestration and reports.
"""

import json

import jsonschema
import pytest

from hetanova.inference.bootstrap import BootstrapSettings
from hetanova.inference.intervals import simultaneous_ci
from hetanova.inference.runner import (
    Decision,
    Method,
    Target,
    TestRequest,
    report_schema,
    run_test,
)
from hetanova.stats.base import StatisticKind
from hetanova.utils.errors import InvalidSettings, UnsupportedCombination

BOOT = BootstrapSettings(replicates=200, seed=31)


def _request(target, method, **kwargs):
    return TestRequest(target=target, method=method, bootstrap=BOOT, **kwargs)


@pytest.mark.parametrize(
    "target,method",
    [
        ("interaction", "lrt"),
        ("interaction", "mct"),
        ("simpleA", "alrt"),
        ("treatmentA", "amct"),
        ("treatmentB", "f"),
        ("simpleB", "mct"),
    ],
)
def test_report_matches_schema(grades, target, method):
    """Test that serialized reports validate against the published schema."""
    report = run_test(grades, _request(target, method, mc_draws=20_000))
    document = json.loads(report.to_json())
    jsonschema.validate(document, report_schema())
    assert document["request"]["target"] == target


def test_grades_decisions(grades):
    """Test the interaction and treatment decisions on the grade summaries."""
    assert run_test(grades, _request("interaction", "lrt")).decision == Decision.FAIL_TO_REJECT
    assert run_test(grades, _request("interaction", "mct")).decision == Decision.FAIL_TO_REJECT
    assert run_test(grades, _request("treatmentA", "lrt")).reject
    assert run_test(grades, _request("treatmentA", "mct")).reject


def test_lrt_report_scale(grades):
    """Test that bootstrap LRT reports compare on the lambda scale."""
    report = run_test(grades, _request("treatmentA", "lrt"))
    assert report.scale == "lambda"
    assert report.statistic.kind == StatisticKind.LRT_TREATMENT_A
    assert report.statistic.value < report.critical_value
    assert report.null_sample.shape == (200,)
    assert report.diagnostics["bootstrap"]["replicates"] == 200


def test_wilks_report_scale(grades):
    """Test that asymptotic LRT reports compare -2 log lambda with chi-square."""
    report = run_test(grades, _request("treatmentA", "alrt"))
    assert report.scale == "neg2log"
    assert report.diagnostics["df"] == 3
    assert report.null_sample is None
    assert report.to_dict()["request"]["bootstrap"] is None


def test_factor_b_uses_transpose(grades):
    """Test that factor-B targets equal factor-A targets on the transposed table."""
    flipped = grades.transpose()
    for b_target, a_target in [("treatmentB", "treatmentA"), ("simpleB", "simpleA")]:
        b_report = run_test(grades, _request(b_target, "mct"))
        a_report = run_test(flipped, _request(a_target, "mct"))
        assert b_report.statistic.value == pytest.approx(a_report.statistic.value)
        assert b_report.critical_value == pytest.approx(a_report.critical_value)


def test_classical_f_decision(grades):
    """Test that the F baseline decides by its p-value."""
    report = run_test(grades, _request("treatmentA", "f"))
    assert report.critical_value is None
    assert report.decision == Decision.of(report.p_value < 0.05)


@pytest.mark.parametrize("target", ["interaction", "simpleA", "simpleB"])
@pytest.mark.parametrize("method", ["amct", "f"])
def test_unsupported_combinations(target, method):
    """Test that treatment-only methods refuse other targets."""
    with pytest.raises(UnsupportedCombination):
        TestRequest(target=target, method=method)


def test_request_validation():
    """Test enum coercion and level validation."""
    request = TestRequest(target="treatmentB", method="mct")
    assert request.target == Target.TREATMENT_B
    assert request.method == Method.MCT_BOOT
    assert request.statistic_kind == StatisticKind.MCT_TREATMENT_A
    with pytest.raises(InvalidSettings):
        TestRequest(target="interaction", method="lrt", alpha=0.0)
    with pytest.raises(ValueError):
        TestRequest(target="rows", method="lrt")


def test_text_report(grades):
    """Test the human-readable report."""
    text = run_test(grades, _request("treatmentA", "mct")).to_text()
    assert "Decision" in text
    assert "REJECT" in text
    assert "200 replicates, seed 31" in text


@pytest.mark.slow
def test_grades_decisions_stable_across_seeds(grades):
    """Test that the grade decisions hold for nearly every bootstrap seed."""
    held = 0
    for seed in range(20):
        boot = BootstrapSettings(replicates=5000, seed=seed)
        reports = {
            (target, method): run_test(
                grades, TestRequest(target=target, method=method, bootstrap=boot)
            )
            for target in ("interaction", "treatmentA")
            for method in ("lrt", "mct")
        }
        ci = simultaneous_ci(grades, "treatmentA", 0.05, boot)
        significant = {i.label for i in ci.intervals if i.significant}
        held += (
            not reports["interaction", "lrt"].reject
            and not reports["interaction", "mct"].reject
            and reports["treatmentA", "lrt"].reject
            and reports["treatmentA", "mct"].reject
            and significant == {"A1-A3", "A2-A3"}
        )
    assert held >= 19
