"""
Command-line argument parsing for hetanova
"""

import argparse

from hetanova import __version__
from hetanova.inference.intervals import CIFamily, CriticalSource
from hetanova.inference.runner import Method, Target
from hetanova.utils.config import (
    DEFAULT_ALPHA,
    DEFAULT_BOOT_REPS,
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITER,
    DEFAULT_MC_DRAWS,
    DEFAULT_MC_SEED,
)


def _add_input_arguments(parser):
    """Summary input: a raw CSV, three matrix CSVs, or a JSON summary document."""
    group = parser.add_argument_group("input")
    group.add_argument("--raw", metavar="FILE", help="Raw observations CSV with header A,B,y")
    group.add_argument("--mean", metavar="FILE", help="a x b matrix CSV of cell means")
    group.add_argument("--n", metavar="FILE", help="a x b matrix CSV of cell sizes")
    group.add_argument("--var", metavar="FILE", help="a x b matrix CSV of unbiased cell variances")
    group.add_argument("--json", metavar="FILE", help="JSON summary document")


def _add_bootstrap_arguments(parser):
    parser.add_argument(
        "--alpha",
        type=float,
        default=DEFAULT_ALPHA,
        help=f"Significance level (default: {DEFAULT_ALPHA})",
    )
    parser.add_argument(
        "--boot-reps",
        type=int,
        default=DEFAULT_BOOT_REPS,
        help=f"Bootstrap replicates (default: {DEFAULT_BOOT_REPS})",
    )
    parser.add_argument("--seed", type=int, help="Bootstrap seed (required for bootstrap methods)")
    parser.add_argument(
        "--epsilon",
        type=float,
        default=DEFAULT_EPSILON,
        help=f"Fixed-point convergence tolerance (default: {DEFAULT_EPSILON})",
    )
    parser.add_argument(
        "--max-iter",
        type=int,
        default=DEFAULT_MAX_ITER,
        help=f"Fixed-point iteration limit (default: {DEFAULT_MAX_ITER})",
    )
    parser.add_argument(
        "--mc-draws",
        type=int,
        default=DEFAULT_MC_DRAWS,
        help=f"Draws for the equicoordinate normal quantile (default: {DEFAULT_MC_DRAWS})",
    )
    parser.add_argument(
        "--mc-seed",
        type=int,
        default=DEFAULT_MC_SEED,
        help="Seed for the equicoordinate normal quantile",
    )


def _threads_parent():
    """--threads after the verb; SUPPRESS keeps a value given before it."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--threads",
        type=int,
        default=argparse.SUPPRESS,
        help="Worker threads or processes (default: $HETANOVA_THREADS or all cores)",
    )
    return parent


def create_parser():
    """Create the argument parser for the CLI."""
    threads = _threads_parent()
    parser = argparse.ArgumentParser(
        prog="hetanova",
        description="hetanova: Two-way ANOVA tests under heteroscedastic cell variances",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Show debug output")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Show warnings only")
    parser.add_argument(
        "--threads",
        type=int,
        help="Worker threads or processes (default: $HETANOVA_THREADS or all cores)",
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    # Summarize command
    summarize_parser = subparsers.add_parser(
        "summarize", help="Reduce a raw CSV to per-cell summaries"
    )
    summarize_parser.add_argument(
        "--raw", metavar="FILE", required=True, help="Raw observations CSV with header A,B,y"
    )
    summarize_parser.add_argument(
        "--out", metavar="FILE", help="Write the JSON summary here (default: stdout)"
    )

    # Test command
    test_parser = subparsers.add_parser(
        "test", parents=[threads], help="Run one hypothesis test"
    )
    _add_input_arguments(test_parser)
    test_parser.add_argument(
        "--target",
        required=True,
        choices=[t.value for t in Target],
        help="Hypothesis to test",
    )
    test_parser.add_argument(
        "--method",
        required=True,
        choices=[m.value for m in Method],
        help="lrt/mct: bootstrap; alrt/amct: asymptotic; f: homoscedastic F baseline",
    )
    _add_bootstrap_arguments(test_parser)
    test_parser.add_argument(
        "--dump-null", metavar="FILE", help="Write the bootstrap null sample, one value per line"
    )
    test_parser.add_argument(
        "--format", choices=["text", "json"], default="text", help="Report format"
    )

    # CI command
    ci_parser = subparsers.add_parser(
        "ci", parents=[threads], help="Simultaneous confidence intervals"
    )
    _add_input_arguments(ci_parser)
    ci_parser.add_argument(
        "--family",
        required=True,
        choices=[f.value for f in CIFamily],
        help="Family of pairwise contrasts",
    )
    ci_parser.add_argument(
        "--source",
        choices=[s.value for s in CriticalSource],
        default=CriticalSource.BOOTSTRAP.value,
        help="Where the critical multiplier comes from (asymptotic: treatment families only)",
    )
    _add_bootstrap_arguments(ci_parser)
    ci_parser.add_argument(
        "--format", choices=["csv", "text"], default="csv", help="Table format"
    )
    ci_parser.add_argument("--out", metavar="FILE", help="Write the table here (default: stdout)")

    # Simulate command
    simulate_parser = subparsers.add_parser(
        "simulate", parents=[threads], help="Monte Carlo size and power study"
    )
    source = simulate_parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", metavar="FILE", help="JSON simulation config")
    source.add_argument("--preset", metavar="NAME", help="Built-in or user preset")
    source.add_argument(
        "--list-presets", action="store_true", help="List available presets and exit"
    )
    simulate_parser.add_argument("--outer", type=int, help="Outer replicates per config")
    simulate_parser.add_argument("--inner", type=int, help="Inner bootstrap replicates")
    simulate_parser.add_argument("--seed", type=int, help="Study seed")
    simulate_parser.add_argument("--out", metavar="FILE", help="Results CSV")

    # Quantile command
    quantile_parser = subparsers.add_parser(
        "quantile", help="Chi-square or equicoordinate normal critical values"
    )
    kind = quantile_parser.add_mutually_exclusive_group(required=True)
    kind.add_argument("--df", type=int, help="Chi-square degrees of freedom")
    kind.add_argument(
        "--amct",
        action="store_true",
        help="Equicoordinate quantile for the treatment MCT of a summary",
    )
    _add_input_arguments(quantile_parser)
    quantile_parser.add_argument(
        "--factor", choices=["A", "B"], default="A", help="Factor for --amct (default: A)"
    )
    quantile_parser.add_argument(
        "--alpha",
        type=float,
        default=DEFAULT_ALPHA,
        help=f"Significance level (default: {DEFAULT_ALPHA})",
    )
    quantile_parser.add_argument(
        "--mc-draws", type=int, default=DEFAULT_MC_DRAWS, help="Monte Carlo draws for --amct"
    )
    quantile_parser.add_argument(
        "--mc-seed", type=int, default=DEFAULT_MC_SEED, help="Monte Carlo seed for --amct"
    )

    return parser


def parse_args(args=None):
    """Parse command line arguments."""
    parser = create_parser()
    return parser.parse_args(args)
