"""
Configuration defaults and paths for hetanova
"""

import os
from pathlib import Path

# Common constants
HOME = Path.home()
CONFIG_DIR = Path(os.environ.get("HETANOVA_CONFIG_DIR", HOME / ".config/hetanova"))

# Test defaults
DEFAULT_ALPHA = 0.05
DEFAULT_BOOT_REPS = 5000
MIN_REPORTED_REPS = 100
DEFAULT_MAX_REDRAWS = 10

# Fixed-point solver defaults
DEFAULT_EPSILON = 1e-8
DEFAULT_MAX_ITER = 10_000

# Equicoordinate quantile defaults
DEFAULT_MC_DRAWS = 200_000
DEFAULT_MC_SEED = 20240229

# Replicates per bootstrap work unit. Part of the determinism contract:
# changing it changes nothing numerically, but it must not depend on the
# number of threads.
CHUNK_SIZE = 256

# Null samples kept in memory for reuse across tests and intervals
NULL_CACHE_SIZE = 32

# Simulation desk-scale defaults
DEFAULT_OUTER_REPS = 2000
DEFAULT_INNER_REPS = 1000
MIN_OUTER_REPS = 100


def get_threads(requested: int | None = None) -> int:
    """Resolve the worker count: explicit value, then $HETANOVA_THREADS, then CPUs."""
    if requested is None:
        env = os.environ.get("HETANOVA_THREADS")
        if env:
            try:
                requested = int(env)
            except ValueError:
                requested = None
    if not requested or requested < 1:
        requested = os.cpu_count() or 1
    return requested


def get_config_path(config_name=None):
    """Get path to a configuration file or directory."""
    config_dir = Path(os.environ.get("HETANOVA_CONFIG_DIR", CONFIG_DIR))

    if config_name:
        return config_dir / config_name
    return config_dir
