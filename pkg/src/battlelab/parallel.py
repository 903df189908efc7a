"""Deterministic fan-out over a worker pool.

Work items carry pre-assigned indices and seeds, and results are merged
back by index, so output is identical at any parallelism level; jobs=1
runs inline in the calling process.
"""
from __future__ import annotations

from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from typing import Callable, Optional, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ProgressFn = Optional[Callable[[int, int], None]]


def run_indexed(items: Sequence[T], worker: Callable[[T], R], jobs: int = 1,
                progress: ProgressFn = None) -> list[R]:
    """Apply `worker` to every item, preserving input order in the output."""
    total = len(items)
    if jobs <= 1 or total <= 1:
        out = []
        for i, item in enumerate(items):
            out.append(worker(item))
            if progress:
                progress(i + 1, total)
        return out

    results: list = [None] * total
    done_count = 0
    with ProcessPoolExecutor(max_workers=min(jobs, total)) as pool:
        pending = {pool.submit(worker, item): i for i, item in enumerate(items)}
        while pending:
            finished, _ = wait(pending, return_when=FIRST_COMPLETED)
            for fut in finished:
                idx = pending.pop(fut)
                results[idx] = fut.result()
                done_count += 1
                if progress:
                    progress(done_count, total)
    return results
