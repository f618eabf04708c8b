"""Deterministic fan-out helpers.

Work is split into blocks whose layout never depends on the worker count,
and partial results are combined in a fixed balanced tree, so a run with
one thread and a run with many produce bit-identical output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, Sequence, TypeVar

import numpy as np

from paraxial_tomo.utils.logging import get_logger

logger = get_logger("utils.parallel")

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(requested: Optional[int] = None, env_value: Optional[int] = None) -> int:
    """Pick the worker count.

    Args:
        requested: Value from the command line (``--threads``).
        env_value: Value from ``PARAXIAL_TOMO_THREADS``; wins when set.

    Returns:
        A positive worker count, defaulting to the available parallelism.
    """
    for candidate in (env_value, requested):
        if candidate is not None and candidate > 0:
            return int(candidate)
    return max(1, os.cpu_count() or 1)


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Apply ``fn`` to every item and return results in input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        results = list(pool.map(fn, items))

    logger.debug("map_ordered_done", items=len(items), workers=workers)
    return results


def pairwise_sum(arrays: Sequence[np.ndarray]) -> np.ndarray:
    """Sum arrays in a fixed balanced tree.

    Args:
        arrays: Non-empty sequence of equally shaped arrays.

    Returns:
        The sum, computed in an order that depends only on ``len(arrays)``.
    """
    if not arrays:
        raise ValueError("pairwise_sum needs at least one array")
    level = list(arrays)
    while len(level) > 1:
        paired = [level[i] + level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            paired.append(level[-1])
        level = paired
    return np.array(level[0], copy=True)


def chunk(items: Sequence[T], size: int) -> list[Sequence[T]]:
    """Split ``items`` into consecutive blocks of at most ``size``."""
    return [items[i : i + size] for i in range(0, len(items), size)]
