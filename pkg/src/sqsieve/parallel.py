"""Order-preserving process-pool map used by the grid scans."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def default_threads() -> int:
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = 1) -> list[R]:
    """Map fn over items; results come back in input order for any thread count.

    fn must be a picklable module-level callable when threads > 1.
    """
    items = list(items)
    n = default_threads() if threads is None else threads
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * n))
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
