"""
Counter-based random streams for block-parallel Monte Carlo.

Paths are cut into fixed-size blocks; block k draws from a Philox generator
keyed by SeedSequence(seed, spawn_key=(k,)). A block's draws therefore depend
only on (seed, k), never on which worker runs it or in what order.
"""
from typing import List

import numpy as np


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def block_sizes(n_paths: int, block_size: int) -> List[int]:
    """Sizes of the consecutive blocks covering n_paths; only the last one may be short."""
    full, rest = divmod(n_paths, block_size)
    return [block_size] * full + ([rest] if rest else [])
