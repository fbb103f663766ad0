"""Job lifecycle, the FIFO queue, and the write-ahead journal.

Intake (watcher and uploads) and the single worker share state only
through the JobStore; every store operation is atomic under one lock. A
journal of JSON lines records each transition so a restarted service
re-queues whatever had not completed and keeps its mission history.
"""

from __future__ import annotations

import json
import threading
import uuid
from collections import deque
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from time import time as wall_time

QUEUED = "queued"
PROCESSING = "processing"
DONE = "done"
FAILED = "failed"


def iso_utc(ts: float) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat(timespec="milliseconds")


@dataclass
class Job:
    """One capture moving through queued -> processing -> done/failed."""

    job_id: str
    source: str                      # "directory" | "upload"
    filename: str
    payload_path: str
    received_at: float
    seq: int
    capture_time: str | None = None
    distance_m: float | None = None
    notes: str | None = None
    status: str = QUEUED
    started_at: float | None = None
    completed_at: float | None = None
    duration_s: float | None = None
    error: str | None = None
    dedupe_key: tuple | None = None  # (name, size, mtime_ns) for directory intake


class JobStore:
    """Thread-safe job registry with FIFO dispatch and journal replay."""

    def __init__(self, journal_path: str | Path):
        self._lock = threading.Lock()
        self._ready = threading.Condition(self._lock)
        self._jobs: dict[str, Job] = {}
        self._queue: deque[str] = deque()
        self._processing_id: str | None = None
        self._next_seq = 0
        self._completion_counter = 0
        self._completion_order: dict[str, int] = {}
        self._journal_path = Path(journal_path)
        self._journal_path.parent.mkdir(parents=True, exist_ok=True)
        if self._journal_path.exists():
            self._replay()
        self._journal = open(self._journal_path, "a", encoding="utf-8")

    # -- intake ------------------------------------------------------------

    def create_job(
        self,
        source: str,
        filename: str,
        payload_path: str,
        capture_time: str | None = None,
        distance_m: float | None = None,
        notes: str | None = None,
        dedupe_key: tuple | None = None,
        job_id: str | None = None,
    ) -> Job:
        job = Job(
            job_id=job_id or uuid.uuid4().hex,
            source=source,
            filename=filename,
            payload_path=payload_path,
            received_at=wall_time(),
            seq=0,
            capture_time=capture_time,
            distance_m=distance_m,
            notes=notes,
            dedupe_key=dedupe_key,
        )
        with self._ready:
            job.seq = self._next_seq
            self._next_seq += 1
            self._jobs[job.job_id] = job
            self._queue.append(job.job_id)
            self._append({"event": "queued", "job": asdict(job)})
            self._ready.notify()
        return job

    # -- worker side --------------------------------------------------------

    def next_job(self, timeout: float | None = None) -> Job | None:
        """Dequeue the oldest queued job and mark it processing.

        Only one job may be processing at a time; callers must finish or
        fail it before asking for the next.
        """
        with self._ready:
            if self._processing_id is not None:
                raise RuntimeError(f"job {self._processing_id} is still processing")
            if not self._queue:
                self._ready.wait(timeout)
            if not self._queue:
                return None
            job = self._jobs[self._queue.popleft()]
            job.status = PROCESSING
            job.started_at = wall_time()
            self._processing_id = job.job_id
            self._append({"event": "processing", "job_id": job.job_id, "started_at": job.started_at})
            return job

    def finish(self, job_id: str, duration_s: float, completed_at: float) -> Job:
        with self._ready:
            job = self._conclude(job_id, DONE, completed_at)
            job.duration_s = duration_s
            self._append({
                "event": "done", "job_id": job_id,
                "completed_at": completed_at, "duration_s": duration_s,
            })
            return job

    def fail(self, job_id: str, error: str) -> Job:
        completed_at = wall_time()
        with self._ready:
            job = self._conclude(job_id, FAILED, completed_at)
            job.error = error
            self._append({"event": "failed", "job_id": job_id,
                          "completed_at": completed_at, "error": error})
            return job

    def _conclude(self, job_id: str, status: str, completed_at: float) -> Job:
        job = self._jobs[job_id]
        job.status = status
        job.completed_at = completed_at
        if self._processing_id == job_id:
            self._processing_id = None
        self._completion_counter += 1
        self._completion_order[job_id] = self._completion_counter
        return job

    # -- read side ----------------------------------------------------------

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

    def update_metadata(self, job_id: str, distance_m: float | None = None,
                        notes: str | None = None) -> Job | None:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                return None
            if distance_m is not None:
                job.distance_m = distance_m
            if notes is not None:
                job.notes = notes
            self._append({"event": "meta", "job_id": job_id,
                          "distance_m": job.distance_m, "notes": job.notes})
            return job

    def mission_entries(self) -> list[Job]:
        """All jobs ordered by arrival."""
        with self._lock:
            return sorted(self._jobs.values(), key=lambda j: (j.received_at, j.seq))

    def completion_sequence(self) -> list[str]:
        """Job ids in the order they concluded (done or failed)."""
        with self._lock:
            return [jid for jid, _ in sorted(self._completion_order.items(), key=lambda kv: kv[1])]

    def seen_directory_keys(self) -> set[tuple]:
        with self._lock:
            return {
                tuple(j.dedupe_key)
                for j in self._jobs.values()
                if j.source == "directory" and j.dedupe_key
            }

    def stats(self) -> dict:
        with self._lock:
            return {
                "jobs": len(self._jobs),
                "queued": len(self._queue),
                "processing": self._processing_id,
            }

    def wake(self) -> None:
        """Nudge a worker blocked in next_job (used during shutdown)."""
        with self._ready:
            self._ready.notify_all()

    def close(self) -> None:
        with self._lock:
            if not self._journal.closed:
                self._journal.close()

    # -- journal ------------------------------------------------------------

    def _append(self, record: dict) -> None:
        self._journal.write(json.dumps(record, separators=(",", ":")) + "\n")
        self._journal.flush()

    def _replay(self) -> None:
        jobs: dict[str, Job] = {}
        with open(self._journal_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                event = record["event"]
                if event == "queued":
                    payload = dict(record["job"])
                    if payload.get("dedupe_key") is not None:
                        payload["dedupe_key"] = tuple(payload["dedupe_key"])
                    jobs[payload["job_id"]] = Job(**payload)
                    continue
                job = jobs.get(record.get("job_id"))
                if job is None:
                    continue
                if event == "processing":
                    job.status = PROCESSING
                    job.started_at = record["started_at"]
                elif event == "done":
                    job.status = DONE
                    job.completed_at = record["completed_at"]
                    job.duration_s = record.get("duration_s")
                elif event == "failed":
                    job.status = FAILED
                    job.completed_at = record["completed_at"]
                    job.error = record.get("error")
                elif event == "meta":
                    job.distance_m = record.get("distance_m")
                    job.notes = record.get("notes")

        for job in sorted(jobs.values(), key=lambda j: j.seq):
            self._jobs[job.job_id] = job
            self._next_seq = max(self._next_seq, job.seq + 1)
            if job.status in (QUEUED, PROCESSING):
                # interrupted by a crash or shutdown: run it again
                job.status = QUEUED
                job.started_at = None
                self._queue.append(job.job_id)
            elif job.completed_at is not None:
                self._completion_counter += 1
                self._completion_order[job.job_id] = self._completion_counter
