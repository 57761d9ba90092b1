"""
Worker Pool - Infrastructure Layer

Runs independent simulation blocks on a thread pool and hands the results
back in block order. numpy releases the GIL inside its array kernels, so
threads scale on the vectorized block loops.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

T = TypeVar("T")


def resolve_threads(threads: Optional[int]) -> int:
    """None or 0 means one worker per CPU."""
    if not threads:
        return os.cpu_count() or 1
    return max(1, threads)


def run_blocks(tasks: Sequence[Callable[[], T]], threads: Optional[int] = None) -> List[T]:
    workers = min(resolve_threads(threads), max(1, len(tasks)))
    if workers == 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [future.result() for future in futures]


def concatenate(parts: Sequence[np.ndarray]) -> np.ndarray:
    """Per-block samples joined in block order."""
    if not parts:
        return np.empty(0)
    return np.concatenate(parts)
