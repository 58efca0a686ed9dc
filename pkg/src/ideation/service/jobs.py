"""In-memory generation job registry with monotone status transitions."""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable


class JobState(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"


_STATE_ORDER = {
    JobState.QUEUED: 0,
    JobState.RUNNING: 1,
    JobState.DONE: 2,
    JobState.FAILED: 2,
}


@dataclass
class Job:
    job_id: str
    state: JobState = JobState.QUEUED
    progress: float = 0.0
    error: str | None = None
    ideas: list[dict] = field(default_factory=list)


class JobRegistry:
    """Thread-safe registry; generation work runs on a single worker thread
    so the counter-based sampler keeps jobs independent of execution order."""

    def __init__(self, max_workers: int = 1):
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()
        self._executor = ThreadPoolExecutor(max_workers=max_workers)

    def submit(self, work: Callable[[str], None]) -> str:
        job_id = uuid.uuid4().hex
        with self._lock:
            self._jobs[job_id] = Job(job_id=job_id)
        self._executor.submit(self._run, job_id, work)
        return job_id

    def _run(self, job_id: str, work: Callable[[str], None]) -> None:
        self.transition(job_id, JobState.RUNNING)
        try:
            work(job_id)
        except Exception as exc:  # the job, not the service, reports the failure
            with self._lock:
                job = self._jobs[job_id]
                job.error = str(exc)
            self.transition(job_id, JobState.FAILED)
        else:
            self.transition(job_id, JobState.DONE)

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

    def transition(self, job_id: str, state: JobState) -> None:
        with self._lock:
            job = self._jobs[job_id]
            if _STATE_ORDER[state] < _STATE_ORDER[job.state]:
                raise RuntimeError(f"job {job_id}: illegal transition {job.state} -> {state}")
            job.state = state
            if state in (JobState.DONE, JobState.FAILED):
                job.progress = 1.0 if state is JobState.DONE else job.progress

    def set_progress(self, job_id: str, done: int, total: int) -> None:
        with self._lock:
            job = self._jobs[job_id]
            job.progress = max(job.progress, done / total if total else 1.0)

    def set_ideas(self, job_id: str, ideas: list[dict]) -> None:
        with self._lock:
            self._jobs[job_id].ideas = ideas

    def shutdown(self) -> None:
        self._executor.shutdown(wait=True)
