"""In-memory job registry for long-running experiments.

Each job runs on a small thread pool inside the service process; the
experiment itself fans its games out to worker processes according to the
request's jobs field. Results stay in memory until the process exits.
"""
from __future__ import annotations

import threading
import traceback
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional


@dataclass
class Job:
    job_id: str
    kind: str
    state: str = "queued"  # queued | running | done | failed
    progress: float = 0.0
    detail: Optional[str] = None
    error: Optional[str] = None
    result: Any = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def set_progress(self, done: int, total: int) -> None:
        with self._lock:
            self.progress = done / total if total else 1.0
            self.detail = f"{done}/{total} work items"


class JobRegistry:
    def __init__(self, max_concurrent: int = 2):
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=max_concurrent,
                                        thread_name_prefix="battlelab-job")

    def submit(self, kind: str, runner: Callable[[Job], Any]) -> Job:
        """Queue `runner(job)`; its return value becomes the job result."""
        job = Job(job_id=uuid.uuid4().hex[:12], kind=kind)
        with self._lock:
            self._jobs[job.job_id] = job

        def _execute() -> None:
            job.state = "running"
            try:
                job.result = runner(job)
                job.progress = 1.0
                job.state = "done"
            except Exception as exc:  # surfaced via the status endpoint
                job.error = f"{type(exc).__name__}: {exc}"
                job.detail = traceback.format_exc(limit=5)
                job.state = "failed"

        self._pool.submit(_execute)
        return job

    def get(self, job_id: str) -> Optional[Job]:
        with self._lock:
            return self._jobs.get(job_id)

    def all_jobs(self) -> list[Job]:
        with self._lock:
            return list(self._jobs.values())

    def shutdown(self) -> None:
        self._pool.shutdown(wait=False, cancel_futures=True)
