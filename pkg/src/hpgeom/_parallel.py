"""Ordered fan-out of independent chunks over worker processes."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from typing import Callable, Sequence


def chunk_ranges(total: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def default_workers() -> int:
    env = os.environ.get("HPGEOM_WORKERS")
    return int(env) if env else 1


def run_ordered(fn: Callable, tasks: Sequence[tuple], workers: int = 1,
                deadline: float | None = None, stop_when: Callable | None = None):
    """Apply ``fn(*task)`` to each task, results in task order.

    Stops early (returning the prefix computed so far and a flag) when the
    wall-clock ``deadline`` passes or ``stop_when(result)`` is true.  The
    prefix is always a contiguous run of tasks, so stopping is deterministic
    with respect to ``stop_when`` at any worker count."""
    results = []
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            if deadline is not None and time.monotonic() > deadline:
                return results, True
            res = fn(*task)
            results.append(res)
            if stop_when is not None and stop_when(res):
                return results, False
        return results, False
    with ProcessPoolExecutor(max_workers=workers) as ex:
        pending = [ex.submit(fn, *task) for task in tasks]
        try:
            for fut in pending:
                if deadline is not None:
                    remaining = max(deadline - time.monotonic(), 0.0)
                    try:
                        res = fut.result(timeout=remaining)
                    except FutureTimeout:
                        return results, True
                else:
                    res = fut.result()
                results.append(res)
                if stop_when is not None and stop_when(res):
                    return results, False
            return results, False
        finally:
            for fut in pending:
                fut.cancel()
