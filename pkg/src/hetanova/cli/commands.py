"""
Command implementations for hetanova CLI
"""

import json
import logging

from hetanova.data.io import (
    read_raw_csv,
    read_summary_csvs,
    read_summary_json,
    summary_to_dict,
    write_summary_json,
)
from hetanova.data.summary import CellSummaryTable, summarize
from hetanova.inference.asymptotic import (
    build_sigma_T,
    chi_square_critical,
    equicoordinate_quantile,
)
from hetanova.inference.bootstrap import BootstrapSettings, write_null_sample
from hetanova.inference.intervals import CriticalSource, simultaneous_ci
from hetanova.inference.runner import Method, TestRequest, run_test
from hetanova.mle.models import SolverSettings
from hetanova.simulation.presets import list_presets, load_config, load_preset
from hetanova.simulation.study import size_power_grid
from hetanova.utils.errors import InputError, InvalidSettings

logger = logging.getLogger("hetanova")


def load_summary(args) -> CellSummaryTable:
    """Resolve the input flags of a verb into one CellSummaryTable."""
    matrices = [args.mean, args.n, args.var]
    given = [args.raw is not None, args.json is not None, any(m is not None for m in matrices)]
    if sum(given) != 1:
        raise InputError("give exactly one input: --raw, --json, or --mean/--n/--var")
    if args.raw:
        return summarize(read_raw_csv(args.raw))
    if args.json:
        return read_summary_json(args.json)
    if any(m is None for m in matrices):
        raise InputError("--mean, --n and --var must be given together")
    return read_summary_csvs(args.mean, args.n, args.var)


def _bootstrap_settings(args, needs_seed: bool) -> BootstrapSettings:
    if needs_seed and args.seed is None:
        raise InvalidSettings("--seed is required for bootstrap methods")
    return BootstrapSettings(
        replicates=args.boot_reps,
        alpha=args.alpha,
        seed=0 if args.seed is None else args.seed,
    )


def _solver_settings(args) -> SolverSettings:
    return SolverSettings(epsilon=args.epsilon, max_iterations=args.max_iter)


def _emit(text: str, path=None):
    if path:
        with open(path, "w") as f:
            f.write(text if text.endswith("\n") else text + "\n")
        logger.info(f"Wrote {path}")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def cmd_summarize(args):
    """Summarize command implementation."""
    summary = summarize(read_raw_csv(args.raw))
    if args.out:
        write_summary_json(args.out, summary)
    else:
        print(json.dumps(summary_to_dict(summary), indent=2))
    return True


def cmd_test(args):
    """Test command implementation."""
    summary = load_summary(args)
    method = Method(args.method)
    request = TestRequest(
        target=args.target,
        method=method,
        alpha=args.alpha,
        bootstrap=_bootstrap_settings(args, method.uses_bootstrap),
        solver=_solver_settings(args),
        mc_draws=args.mc_draws,
        mc_seed=args.mc_seed,
    )
    report = run_test(summary, request, threads=args.threads)

    if args.dump_null:
        if report.null_sample is None:
            logger.warning(f"Method {method.value} has no bootstrap null sample to dump")
        else:
            write_null_sample(args.dump_null, report.null_sample)

    print(report.to_json() if args.format == "json" else report.to_text())
    return True


def cmd_ci(args):
    """CI command implementation."""
    summary = load_summary(args)
    source = CriticalSource(args.source)
    result = simultaneous_ci(
        summary,
        args.family,
        alpha=args.alpha,
        bootstrap=_bootstrap_settings(args, source == CriticalSource.BOOTSTRAP),
        solver=_solver_settings(args),
        source=source,
        threads=args.threads,
        mc_draws=args.mc_draws,
        mc_seed=args.mc_seed,
    )
    _emit(result.to_csv() if args.format == "csv" else result.to_text(), args.out)
    return True


def cmd_simulate(args):
    """Simulate command implementation."""
    if args.list_presets:
        for name in list_presets():
            print(name)
        return True

    if args.config:
        configs = load_config(args.config, args.outer, args.inner, args.seed)
    else:
        configs = load_preset(args.preset, args.outer, args.inner, args.seed)

    table = size_power_grid(configs, output=args.out, threads=args.threads)
    if table.empty:
        print("No configurations to run")
    else:
        print(table.to_string(index=False, float_format=lambda v: f"{v:.4f}"))
    return True


def cmd_quantile(args):
    """Quantile command implementation."""
    if args.df is not None:
        print(f"{chi_square_critical(args.df, args.alpha):.6f}")
        return True

    summary = load_summary(args)
    oriented = summary.transpose() if args.factor == "B" else summary
    d = equicoordinate_quantile(build_sigma_T(oriented), args.alpha, args.mc_draws, args.mc_seed)
    print(f"{d:.6f}")
    return True
