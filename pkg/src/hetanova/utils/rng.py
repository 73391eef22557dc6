"""
Counter-based random streams for hetanova

Every random draw in the package comes from a Philox generator whose key is
(seed, domain) and whose counter starts at (0, 0, attempt, stream). Streams
never overlap in practice (2**128 draws apart), so replicate ``r`` gets the
same numbers whatever order or thread computes it.
"""

import numpy as np

# Key words separating the consumers of a single user seed
BOOTSTRAP = 0
OUTER = 1
EQUICOORDINATE = 2
INNER_SEED = 3

_UINT64 = 2**64


def check_seed(seed: int) -> int:
    """Validate a 64-bit unsigned seed."""
    seed = int(seed)
    if not 0 <= seed < _UINT64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def substream(
    seed: int, stream: int = 0, attempt: int = 0, domain: int = BOOTSTRAP
) -> np.random.Generator:
    """Return the generator for one (seed, domain, stream, attempt) address."""
    bit_generator = np.random.Philox(
        key=np.array([check_seed(seed), domain], dtype=np.uint64),
        counter=np.array([0, 0, attempt, stream], dtype=np.uint64),
    )
    return np.random.Generator(bit_generator)


def derive_seed(seed: int, stream: int, domain: int = INNER_SEED) -> int:
    """Derive a child 64-bit seed, e.g. the inner bootstrap seed of a study replicate."""
    gen = substream(seed, stream, domain=domain)
    return int(gen.integers(0, _UINT64, dtype=np.uint64))
