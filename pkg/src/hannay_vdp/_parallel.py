"""Process-based fan-out for independent numerical jobs.

Concurrency is capped by the HANNAY_VDP_THREADS environment variable
(unset or 0 means one worker per CPU).  Results are collected in input
order, so parallel runs are deterministic.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def worker_count(requested=None) -> int:
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("HANNAY_VDP_THREADS", "0")
    try:
        cap = int(env)
    except ValueError:
        cap = 0
    if cap <= 0:
        return os.cpu_count() or 1
    return cap


def parallel_map(fn, items, workers=None):
    """Ordered map over items; falls back to serial for one worker/item."""
    items = list(items)
    n = worker_count(workers)
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
