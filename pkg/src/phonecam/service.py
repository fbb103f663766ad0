"""The remote-server half of the loop: intake, sequential worker, publishing.

Uploads and watched-directory files enter one FIFO queue; a single worker
runs the vision pipeline and publishes each result atomically (written to
a temp directory, renamed into place) so a result URL either 404s or
serves the complete artifact. Reads are served concurrently with
processing.
"""

from __future__ import annotations

import json
import logging
import os
import shutil
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__, kernels
from .config import ServiceConfig
from .jobs import DONE, Job, JobStore, iso_utc
from .pipeline import analyze_bytes, report_dict
from .watcher import DirectoryWatcher

logger = logging.getLogger("phonecam.service")

MAX_UPLOAD_BYTES = 16 * 1024 * 1024
PROCESSING_BUDGET_S = 120.0
RESULT_ARTIFACTS = {"annotated.png", "processed.png", "report.json"}


class BudgetExceeded(Exception):
    """Processing ran past the hard per-image budget."""


class PhonecamService:
    """Owns the store, the watcher, and the single processing worker."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.publish_path = Path(config.publish_path)
        self.publish_path.mkdir(parents=True, exist_ok=True)
        self.spool_path = self.publish_path / "_spool"
        self.spool_path.mkdir(exist_ok=True)
        self.inbox_path = Path(config.inbox_path)
        self.inbox_path.mkdir(parents=True, exist_ok=True)

        self.store = JobStore(self.publish_path / "journal.jsonl")
        self.watcher = DirectoryWatcher(
            self.inbox_path, config.prefix, self.store, config.poll_interval
        )
        self._stop = threading.Event()
        self._worker: threading.Thread | None = None

    # -- lifecycle -----------------------------------------------------------

    def start(self, watch: bool = True) -> None:
        self._stop.clear()
        self._worker = threading.Thread(target=self._worker_loop, name="phonecam-worker", daemon=True)
        self._worker.start()
        if watch:
            self.watcher.start()

    def stop(self, drain: bool = True) -> None:
        """Stop intake and the worker; drain lets the in-flight job finish."""
        self.watcher.stop()
        self._stop.set()
        self.store.wake()
        if self._worker is not None:
            self._worker.join(timeout=PROCESSING_BUDGET_S if drain else 1.0)
            self._worker = None
        self.store.close()

    # -- intake ----------------------------------------------------------------

    def submit_upload(
        self,
        filename: str,
        data: bytes,
        capture_time: str | None = None,
        distance_m: float | None = None,
        notes: str | None = None,
    ) -> Job:
        """Spool an uploaded image and queue its job (prefix already checked)."""
        job_id = uuid.uuid4().hex
        suffix = Path(filename).suffix or ".bin"
        spooled = self.spool_path / f"{job_id}{suffix}"
        spooled.write_bytes(data)
        return self.store.create_job(
            source="upload",
            filename=filename,
            payload_path=str(spooled),
            capture_time=capture_time,
            distance_m=distance_m,
            notes=notes,
            job_id=job_id,
        )

    # -- worker ----------------------------------------------------------------

    def _worker_loop(self) -> None:
        while not self._stop.is_set():
            job = self.store.next_job(timeout=0.2)
            if job is None:
                continue
            try:
                self._process(job)
            except Exception as exc:  # a bad image must never stall the queue
                logger.exception("job %s failed", job.job_id)
                self.store.fail(job.job_id, f"{type(exc).__name__}: {exc}")

    def _process(self, job: Job) -> None:
        started = time.monotonic()
        data = Path(job.payload_path).read_bytes()
        analysis = analyze_bytes(data, self.config.pipeline)
        completed_at = time.time()
        duration = time.monotonic() - started
        if duration >= PROCESSING_BUDGET_S:
            raise BudgetExceeded(f"processing took {duration:.1f} s (budget {PROCESSING_BUDGET_S:.0f} s)")
        report = report_dict(
            analysis,
            job_id=job.job_id,
            received_at=iso_utc(job.received_at),
            completed_at=iso_utc(completed_at),
        )
        self._publish(job.job_id, report, analysis.annotated_raw, analysis.annotated_processed)
        self.store.finish(job.job_id, duration_s=duration, completed_at=completed_at)
        logger.info("job %s done in %.2f s", job.job_id, duration)

    def _publish(self, job_id: str, report: dict, annotated_raw: bytes,
                 annotated_processed: bytes) -> None:
        tmp = self.publish_path / "_tmp" / f"{job_id}-{uuid.uuid4().hex[:8]}"
        tmp.mkdir(parents=True)
        (tmp / "annotated.png").write_bytes(annotated_raw)
        (tmp / "processed.png").write_bytes(annotated_processed)
        (tmp / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True))
        final = self.publish_path / job_id
        if final.exists():  # re-publish after an interrupted run
            shutil.rmtree(final)
        os.replace(tmp, final)

    # -- read side ---------------------------------------------------------------

    def job_view(self, job: Job) -> dict:
        view = {
            "job_id": job.job_id,
            "status": job.status,
            "source": job.source,
            "filename": job.filename,
            "capture_time": job.capture_time,
            "received_at": iso_utc(job.received_at),
            "completed_at": iso_utc(job.completed_at) if job.completed_at else None,
            "duration_s": job.duration_s,
            "distance_m": job.distance_m,
            "notes": job.notes,
            "error": job.error,
            "results": None,
        }
        if job.status == DONE:
            base = f"/results/{job.job_id}"
            view["results"] = {
                "annotated": f"{base}/annotated.png",
                "processed": f"{base}/processed.png",
                "report": f"{base}/report.json",
            }
        return view


class MetadataUpdate(BaseModel):
    distance_m: float | None = None
    notes: str | None = None


def create_app(service: PhonecamService) -> FastAPI:
    app = FastAPI(title="phonecam", version=__version__)
    prefix = service.config.prefix

    @app.post("/api/v1/images", status_code=202)
    async def upload_image(
        image: UploadFile | None = File(default=None),
        capture_time: str | None = Form(default=None),
        distance_m: float | None = Form(default=None),
        notes: str | None = Form(default=None),
    ):
        if image is None or not image.filename:
            raise HTTPException(status_code=400, detail="multipart field 'image' with a filename is required")
        chunks = []
        total = 0
        while True:
            chunk = await image.read(1024 * 1024)
            if not chunk:
                break
            total += len(chunk)
            if total > MAX_UPLOAD_BYTES:
                raise HTTPException(status_code=413, detail=f"payload exceeds {MAX_UPLOAD_BYTES} bytes")
            chunks.append(chunk)
        filename = Path(image.filename).name
        if not filename.startswith(prefix):
            raise HTTPException(status_code=422, detail=f"filename must start with prefix {prefix!r}")
        job = service.submit_upload(filename, b"".join(chunks), capture_time, distance_m, notes)
        return {"job_id": job.job_id, "status": job.status}

    @app.get("/api/v1/jobs/{job_id}")
    def job_status(job_id: str):
        job = service.store.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return service.job_view(job)

    @app.post("/api/v1/jobs/{job_id}/metadata")
    def update_metadata(job_id: str, update: MetadataUpdate):
        job = service.store.update_metadata(job_id, update.distance_m, update.notes)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return service.job_view(job)

    @app.get("/api/v1/mission")
    def mission_log():
        return {"entries": [service.job_view(j) for j in service.store.mission_entries()]}

    @app.get("/api/v1/health")
    def health():
        stats = service.store.stats()
        return {
            "status": "ok",
            "version": __version__,
            "kernel_backend": kernels.BACKEND,
            "prefix": prefix,
            **stats,
        }

    @app.get("/results/{job_id}/{artifact}")
    def result_artifact(job_id: str, artifact: str):
        if artifact not in RESULT_ARTIFACTS or not job_id.isalnum():
            raise HTTPException(status_code=404, detail="no such artifact")
        path = service.publish_path / job_id / artifact
        if not path.is_file():
            raise HTTPException(status_code=404, detail="not published")
        return FileResponse(path)

    console_dir = service.config.console_path
    if console_dir and Path(console_dir).is_dir():
        app.mount("/console", StaticFiles(directory=console_dir, html=True), name="console")

    @app.get("/")
    def root():
        return JSONResponse({"service": "phonecam", "api": "/api/v1", "results": "/results"})

    return app
