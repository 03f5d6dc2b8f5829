"""Deterministic block-parallel execution helpers.

Work is cut into fixed-size blocks indexed from zero.  Block ``b`` draws from
``PCG64(seed)`` advanced by ``b`` jumps, so the random stream a block sees does
not depend on how many workers run or which worker picks the block up.
Results come back in block order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

PRNG_NAME = "numpy.PCG64/jumped-v1"


def block_rng(seed: int, block: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    return np.random.Generator(np.random.PCG64(seed).jumped(block))


def blocks(total: int, size: int) -> list[tuple[int, int, int]]:
    """``(block_index, start, stop)`` triples covering ``range(total)``."""
    return [(b, start, min(start + size, total)) for b, start in enumerate(range(0, total, size))]


def run_blocks(func: Callable, tasks: Sequence[tuple], workers: int = 1) -> list:
    """Apply ``func(*task)`` to every task, preserving task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [func(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, *zip(*tasks)))
