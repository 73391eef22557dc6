"""
Shared fixtures for the hetanova test suite.
"""

import numpy as np
import pytest

from hetanova.data.summary import CellSummaryTable
from hetanova.inference.bootstrap import clear_cache

# Student grades by weekly study time (A, 4 levels) and health status (B, 4 levels)
GRADES_N = [
    [20, 20, 15, 50],
    [56, 43, 30, 69],
    [9, 18, 17, 21],
    [7, 10, 4, 6],
]
GRADES_MEAN = [
    [11.4, 10.0, 10.8, 10.12],
    [11.0178, 10.1395, 10.0, 10.9565],
    [13.8889, 11.8333, 11.8235, 11.6191],
    [12.5714, 11.6, 11.25, 12.0],
]
GRADES_VAR = [
    [13.5158, 10.9474, 19.3143, 11.2098],
    [10.7088, 9.5515, 6.5517, 10.8951],
    [13.3611, 6.9706, 11.5294, 7.3476],
    [17.6190, 14.0444, 3.5833, 16.0],
]


@pytest.fixture
def grades():
    """The 4 x 4 study-time by health-status grade summaries."""
    return CellSummaryTable.from_arrays(GRADES_MEAN, GRADES_N, GRADES_VAR)


@pytest.fixture
def make_summary():
    """Factory for random heteroscedastic summaries."""

    def make(a=3, b=3, seed=0, n_low=5, n_high=30, shift=None):
        rng = np.random.default_rng(seed)
        n = rng.integers(n_low, n_high, size=(a, b))
        mean = rng.normal(0.0, 2.0, size=(a, b))
        if shift is not None:
            mean = mean + shift
        var = rng.uniform(0.5, 5.0, size=(a, b))
        return CellSummaryTable.from_arrays(mean, n, var)

    return make


@pytest.fixture(autouse=True)
def fresh_null_cache():
    """Start every test with an empty bootstrap cache."""
    clear_cache()
    yield
    clear_cache()
