"""
Tests for the command-line argument parsing.
"""

import pytest

from hetanova.cli.args import create_parser, parse_args
from hetanova.utils.config import DEFAULT_ALPHA, DEFAULT_BOOT_REPS


def test_create_parser():
    """Test that the argument parser is created correctly."""
    parser = create_parser()

    # Check that the parser has the expected commands
    subparsers_actions = [
        action for action in parser._actions if action.dest == "command"
    ]
    assert len(subparsers_actions) == 1

    choices = subparsers_actions[0].choices.keys()
    assert set(choices) == {"summarize", "test", "ci", "simulate", "quantile"}


def test_parse_args_test_defaults():
    """Test parsing the test command with only the required flags."""
    args = parse_args(["test", "--json", "s.json", "--target", "treatmentA", "--method", "mct"])

    assert args.command == "test"
    assert args.json == "s.json"
    assert args.alpha == DEFAULT_ALPHA
    assert args.boot_reps == DEFAULT_BOOT_REPS
    assert args.seed is None
    assert args.format == "text"
    assert args.dump_null is None


def test_parse_args_test_with_options():
    """Test parsing the test command with additional options."""
    args = parse_args(
        [
            "--threads",
            "4",
            "test",
            "--mean", "m.csv", "--n", "n.csv", "--var", "v.csv",
            "--target", "interaction",
            "--method", "lrt",
            "--seed", "7",
            "--boot-reps", "2000",
            "--epsilon", "1e-10",
            "--format", "json",
        ]
    )

    assert args.threads == 4
    assert (args.mean, args.n, args.var) == ("m.csv", "n.csv", "v.csv")
    assert args.seed == 7
    assert args.boot_reps == 2000
    assert args.epsilon == 1e-10
    assert args.format == "json"


@pytest.mark.parametrize(
    "verb",
    [
        ["test", "--raw", "x.csv", "--target", "interaction", "--method", "lrt"],
        ["ci", "--raw", "x.csv", "--family", "treatmentA"],
        ["simulate", "--preset", "table3"],
    ],
)
def test_threads_after_verb(verb):
    """Test that --threads works on either side of the verb."""
    assert parse_args(verb + ["--threads", "3"]).threads == 3
    assert parse_args(["--threads", "5"] + verb).threads == 5
    assert parse_args(verb).threads is None


def test_parse_args_rejects_unknown_target():
    """Test that targets are restricted to the known hypotheses."""
    with pytest.raises(SystemExit):
        parse_args(["test", "--raw", "x.csv", "--target", "rows", "--method", "lrt"])


def test_parse_args_ci():
    """Test parsing the ci command."""
    args = parse_args(["ci", "--raw", "x.csv", "--family", "treatmentB", "--source", "asymptotic"])

    assert args.family == "treatmentB"
    assert args.source == "asymptotic"
    assert args.format == "csv"
    assert args.out is None


def test_parse_args_simulate_sources_exclusive():
    """Test that simulate takes exactly one of --config, --preset, --list-presets."""
    args = parse_args(["simulate", "--preset", "table5", "--outer", "200", "--inner", "500"])
    assert args.preset == "table5"
    assert (args.outer, args.inner) == (200, 500)

    with pytest.raises(SystemExit):
        parse_args(["simulate", "--preset", "table5", "--config", "c.json"])
    with pytest.raises(SystemExit):
        parse_args(["simulate"])


def test_parse_args_quantile():
    """Test parsing both quantile forms."""
    args = parse_args(["quantile", "--df", "3", "--alpha", "0.01"])
    assert args.df == 3
    assert args.amct is False

    args = parse_args(["quantile", "--amct", "--json", "s.json", "--factor", "B"])
    assert args.amct is True
    assert args.factor == "B"


def test_verbosity_flags_exclusive():
    """Test that --verbose and --quiet cannot be combined."""
    assert parse_args(["-v", "quantile", "--df", "1"]).verbose is True
    with pytest.raises(SystemExit):
        parse_args(["-v", "-q", "quantile", "--df", "1"])
