"""Ordered map over realizations with an optional thread pool."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["worker_count", "map_ordered"]

THREADS_ENV = "DIFFRAKT_THREADS"


def worker_count(requested: int | None = None) -> int:
    """``requested``, else ``$DIFFRAKT_THREADS``, else 1."""
    if requested is None:
        raw = os.environ.get(THREADS_ENV, "").strip()
        requested = int(raw) if raw else 1
    if requested < 1:
        raise ValueError(f"worker count must be positive, got {requested}")
    return requested


def map_ordered(fn, items, workers: int | None = None) -> list:
    """``[fn(x) for x in items]``; results keep the input order for any worker count."""
    items = list(items)
    n = worker_count(workers)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
