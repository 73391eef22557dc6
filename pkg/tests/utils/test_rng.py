"""
Tests for the counter-based random streams.
"""

import numpy as np
import pytest

from hetanova.utils.rng import BOOTSTRAP, OUTER, check_seed, derive_seed, substream


def test_substream_is_addressable():
    """Test that an address always yields the same numbers."""
    first = substream(12, stream=5, attempt=1).standard_normal(10)
    second = substream(12, stream=5, attempt=1).standard_normal(10)
    np.testing.assert_array_equal(first, second)


@pytest.mark.parametrize(
    "other",
    [
        {"seed": 13, "stream": 5, "attempt": 1, "domain": BOOTSTRAP},
        {"seed": 12, "stream": 6, "attempt": 1, "domain": BOOTSTRAP},
        {"seed": 12, "stream": 5, "attempt": 0, "domain": BOOTSTRAP},
        {"seed": 12, "stream": 5, "attempt": 1, "domain": OUTER},
    ],
)
def test_substreams_differ(other):
    """Test that changing any part of the address changes the draws."""
    base = substream(12, stream=5, attempt=1).standard_normal(10)
    assert not np.array_equal(base, substream(**other).standard_normal(10))


def test_check_seed():
    """Test the 64-bit seed range."""
    assert check_seed(2**64 - 1) == 2**64 - 1
    with pytest.raises(ValueError):
        check_seed(-1)
    with pytest.raises(ValueError):
        check_seed(2**64)


def test_derive_seed():
    """Test that derived seeds are valid, stable and distinct."""
    seeds = [derive_seed(99, r) for r in range(50)]
    assert seeds == [derive_seed(99, r) for r in range(50)]
    assert len(set(seeds)) == 50
    assert all(check_seed(s) == s for s in seeds)
