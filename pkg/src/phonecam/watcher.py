"""Periodic inbox scanner: prefix-matching image files become jobs.

Files are never moved or deleted; ingestion is deduplicated by
(name, size, mtime), so an unchanged file seen across polls produces
exactly one job while a rewritten one is picked up again.
"""

from __future__ import annotations

import logging
import threading
from pathlib import Path

from .jobs import JobStore

logger = logging.getLogger("phonecam.watcher")

IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg"}


class DirectoryWatcher:
    def __init__(self, inbox_path: str | Path, prefix: str, store: JobStore,
                 poll_interval: float = 10.0):
        self.inbox = Path(inbox_path)
        self.prefix = prefix
        self.store = store
        self.poll_interval = poll_interval
        self._seen: set[tuple] = store.seen_directory_keys()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def scan_once(self) -> int:
        """One poll of the inbox; returns the number of jobs queued."""
        try:
            entries = sorted(p for p in self.inbox.iterdir() if p.is_file())
        except OSError as exc:
            logger.warning("inbox unreadable, retrying next poll: %s", exc)
            return 0
        queued = 0
        for path in entries:
            if path.suffix.lower() not in IMAGE_EXTENSIONS:
                continue
            if not path.name.startswith(self.prefix):
                continue
            try:
                stat = path.stat()
            except OSError:
                continue
            key = (path.name, stat.st_size, stat.st_mtime_ns)
            if key in self._seen:
                continue
            self._seen.add(key)
            self.store.create_job(
                source="directory",
                filename=path.name,
                payload_path=str(path),
                dedupe_key=key,
            )
            queued += 1
        return queued

    def start(self) -> None:
        self._stop.clear()
        self._thread = threading.Thread(target=self._run, name="phonecam-watcher", daemon=True)
        self._thread.start()

    def _run(self) -> None:
        while not self._stop.is_set():
            self.scan_once()
            self._stop.wait(self.poll_interval)

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=self.poll_interval + 5)
            self._thread = None
