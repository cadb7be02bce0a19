"""Slow task worker: dequeue, online-blacklist check, crawl, detect, cache.

Pipeline order is strict: the online check runs before any fetch, and
the fetch before the detector. An unavailable online blacklist degrades
to not-listed with a warning; detection must not depend on a third
party being up. Every dequeued task ends with exactly one cache write
followed by exactly one complete().
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Protocol

from .cache import VerdictCache
from .crawler import DEFAULT_MAX_BYTES, DEFAULT_TIMEOUT_SECS, Fetcher
from .model import UrlRecord, Verdict, VerdictSource, VerdictStatus, normalize, utcnow
from .rbpd import RbpdDetector
from .taskqueue import DetectionTask, TaskQueue

log = logging.getLogger(__name__)


class CheckResult(Enum):
    LISTED = "listed"
    NOT_LISTED = "not_listed"
    UNAVAILABLE = "unavailable"


class OnlineBlacklistClient(Protocol):
    def check(self, url: UrlRecord) -> CheckResult: ...


class MockOnlineBlacklist:
    """Configurable listed-set with failure injection, for tests and demos."""

    def __init__(self, listed: set[str] | None = None, unavailable: bool = False):
        self.listed = {normalize(u).normalized for u in (listed or set())}
        self.unavailable = unavailable

    @classmethod
    def from_file(cls, path: str | Path) -> "MockOnlineBlacklist":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        urls = {l.strip() for l in lines if l.strip() and not l.startswith("#")}
        return cls(listed=urls)

    def check(self, url: UrlRecord) -> CheckResult:
        if self.unavailable:
            return CheckResult.UNAVAILABLE
        return CheckResult.LISTED if url.normalized in self.listed else CheckResult.NOT_LISTED


class NullOnlineBlacklist:
    def check(self, url: UrlRecord) -> CheckResult:
        return CheckResult.NOT_LISTED


@dataclass(frozen=True)
class StwConfig:
    worker_count: int = 4
    crawl_timeout_secs: float = DEFAULT_TIMEOUT_SECS
    crawl_max_bytes: int = DEFAULT_MAX_BYTES

    def __post_init__(self) -> None:
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")


class SlowTaskWorker:
    def __init__(
        self,
        queue: TaskQueue,
        cache: VerdictCache,
        fetcher: Fetcher,
        detector: RbpdDetector,
        online_client: OnlineBlacklistClient,
        config: StwConfig = StwConfig(),
    ):
        self._queue = queue
        self._cache = cache
        self._fetcher = fetcher
        self._detector = detector
        self._online = online_client
        self._config = config

    def process_task(self, task: DetectionTask) -> Verdict:
        """Run the full slow pipeline; the verdict is cached under the
        submitted normalized URL before the task is marked complete."""
        url = task.url
        try:
            verdict = self._analyze(url)
        except Exception as exc:  # no failure may leak; record and move on
            log.exception("slow task failed for %s", url.normalized)
            verdict = Verdict(
                status=VerdictStatus.ERROR,
                source=VerdictSource.NONE,
                decided_at=utcnow(),
                detail=f"internal: {exc}",
            )
        self._cache.put(url, verdict)
        self._queue.complete(task)
        return verdict

    def _analyze(self, url: UrlRecord) -> Verdict:
        result = self._online.check(url)
        if result == CheckResult.LISTED:
            return Verdict(
                status=VerdictStatus.PHISHING,
                source=VerdictSource.ONLINE_BLACKLIST,
                decided_at=utcnow(),
            )
        if result == CheckResult.UNAVAILABLE:
            log.warning("online blacklist unavailable; proceeding for %s", url.normalized)
        outcome = self._fetcher.fetch(
            url,
            timeout=self._config.crawl_timeout_secs,
            max_bytes=self._config.crawl_max_bytes,
        )
        if outcome.error is not None:
            return Verdict(
                status=VerdictStatus.ERROR,
                source=VerdictSource.NONE,
                decided_at=utcnow(),
                detail=outcome.error.value,
            )
        content = outcome.content
        assert content is not None
        return self._detector.analyze(content.url, content)


class StwPool:
    """worker_count consumer loops over the shared queue."""

    def __init__(self, worker: SlowTaskWorker, queue: TaskQueue, config: StwConfig,
                 dequeue_timeout: float = 0.2):
        self._worker = worker
        self._queue = queue
        self._config = config
        self._dequeue_timeout = dequeue_timeout
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []

    def start(self) -> None:
        if self._threads:
            raise RuntimeError("pool already started")
        self._stop.clear()
        for i in range(self._config.worker_count):
            t = threading.Thread(target=self._run, name=f"stw-{i}", daemon=True)
            t.start()
            self._threads.append(t)

    def _run(self) -> None:
        while not self._stop.is_set():
            task = self._queue.dequeue(timeout=self._dequeue_timeout)
            if task is None:
                continue
            try:
                self._worker.process_task(task)
            except Exception:
                # process_task only raises if the cache write itself blew
                # up; hand the task back per the retry policy.
                log.exception("worker crashed on %s", task.url.normalized)
                try:
                    self._queue.retry(task)
                except Exception:
                    pass

    def stop(self) -> None:
        """Stop accepting work and drain in-flight tasks."""
        self._stop.set()
        for t in self._threads:
            t.join()
        self._threads = []

    @property
    def worker_count(self) -> int:
        return self._config.worker_count

    def drain(self, timeout: float = 60.0) -> bool:
        """Block until the queue and in-flight set are empty."""
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            if self._queue.depth == 0 and self._queue.in_flight_count == 0:
                return True
            time.sleep(0.01)
        return False
