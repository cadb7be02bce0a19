"""Bounded, deduplicating FIFO of pending detection tasks.

One live task per normalized URL, whether queued or in-flight: producers
hammering the same URL get AlreadyTracked instead of duplicate work. The
check-and-insert is atomic under one lock.

An optional append-only journal records enqueue/dequeue/complete events
so a restart can re-enqueue interrupted work: tasks that were in-flight
when the process died come back with attempt+1 (dropped past the attempt
cap), still-queued tasks come back as they were.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from pathlib import Path

from .model import UrlRecord, normalize, utcnow


class EnqueueResult(Enum):
    ENQUEUED = "enqueued"
    ALREADY_TRACKED = "already_tracked"
    FULL = "full"


class UnknownTask(KeyError):
    """complete() called for a task that is not in-flight."""


@dataclass(frozen=True)
class DetectionTask:
    url: UrlRecord
    enqueued_at: datetime
    attempt: int = 1


class TaskQueue:
    def __init__(
        self,
        capacity: int = 10_000,
        max_attempts: int = 3,
        journal_path: str | Path | None = None,
    ):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self._capacity = capacity
        self._max_attempts = max_attempts
        self._lock = threading.Lock()
        self._not_empty = threading.Condition(self._lock)
        self._queue: deque[DetectionTask] = deque()
        self._queued_keys: set[str] = set()
        self._in_flight: dict[str, DetectionTask] = {}
        self._journal_path = Path(journal_path) if journal_path else None
        self._journal_file = None
        recovered: list[DetectionTask] = []
        if self._journal_path is not None:
            if self._journal_path.exists():
                recovered = self._recover()
            self._journal_path.parent.mkdir(parents=True, exist_ok=True)
            # Fresh journal; recovered tasks are re-logged as enqueues.
            self._journal_file = self._journal_path.open("w", encoding="utf-8")
            for task in recovered:
                self._queue.append(task)
                self._queued_keys.add(task.url.normalized)
                self._log("E", task.url.normalized, task.attempt)

    def _recover(self) -> list[DetectionTask]:
        assert self._journal_path is not None
        queued: dict[str, int] = {}
        inflight: dict[str, int] = {}
        order: list[str] = []
        with self._journal_path.open(encoding="utf-8") as fh:
            for line in fh:
                parts = line.rstrip("\n").split("\t")
                if len(parts) < 2:
                    continue
                op, key = parts[0], parts[1]
                if op == "E":
                    queued[key] = int(parts[2]) if len(parts) > 2 else 1
                    order.append(key)
                elif op == "D" and key in queued:
                    inflight[key] = queued.pop(key)
                elif op == "C":
                    inflight.pop(key, None)
        tasks = []
        now = utcnow()
        for key in order:
            if key in queued:
                attempt = queued[key]
            elif key in inflight:
                attempt = inflight[key] + 1
            else:
                continue
            if attempt <= self._max_attempts:
                tasks.append(
                    DetectionTask(url=normalize(key), enqueued_at=now, attempt=attempt)
                )
        return tasks

    def _log(self, op: str, key: str, attempt: int | None = None) -> None:
        if self._journal_file is None:
            return
        line = f"{op}\t{key}" + (f"\t{attempt}" if attempt is not None else "")
        self._journal_file.write(line + "\n")
        self._journal_file.flush()

    def enqueue(self, url: UrlRecord, attempt: int = 1) -> EnqueueResult:
        with self._lock:
            key = url.normalized
            if key in self._in_flight or key in self._queued_keys:
                return EnqueueResult.ALREADY_TRACKED
            if len(self._queue) >= self._capacity:
                return EnqueueResult.FULL
            task = DetectionTask(url=url, enqueued_at=utcnow(), attempt=attempt)
            self._queue.append(task)
            self._queued_keys.add(key)
            self._log("E", key, attempt)
            self._not_empty.notify()
            return EnqueueResult.ENQUEUED

    def dequeue(self, timeout: float | None = None) -> DetectionTask | None:
        deadline = None if timeout is None else time.monotonic() + timeout
        with self._not_empty:
            while not self._queue:
                remaining = None if deadline is None else deadline - time.monotonic()
                if remaining is not None and remaining <= 0:
                    return None
                if not self._not_empty.wait(remaining):
                    return None
            task = self._queue.popleft()
            self._queued_keys.discard(task.url.normalized)
            self._in_flight[task.url.normalized] = task
            self._log("D", task.url.normalized)
            return task

    def complete(self, task: DetectionTask) -> None:
        with self._lock:
            if task.url.normalized not in self._in_flight:
                raise UnknownTask(task.url.normalized)
            del self._in_flight[task.url.normalized]
            self._log("C", task.url.normalized)

    def retry(self, task: DetectionTask) -> EnqueueResult | None:
        """Complete a failed task and re-enqueue it, honoring the attempt cap."""
        self.complete(task)
        if task.attempt >= self._max_attempts:
            return None
        return self.enqueue(task.url, attempt=task.attempt + 1)

    @property
    def depth(self) -> int:
        return len(self._queue)

    @property
    def in_flight_count(self) -> int:
        return len(self._in_flight)

    def is_tracked(self, url: UrlRecord) -> bool:
        with self._lock:
            key = url.normalized
            return key in self._in_flight or key in self._queued_keys

    def live_counts(self) -> dict[str, int]:
        """Per-URL count over queued + in-flight; used by invariant tests."""
        with self._lock:
            counts: dict[str, int] = {}
            for t in self._queue:
                counts[t.url.normalized] = counts.get(t.url.normalized, 0) + 1
            for key in self._in_flight:
                counts[key] = counts.get(key, 0) + 1
            return counts

    def close(self) -> None:
        with self._lock:
            if self._journal_file is not None:
                self._journal_file.close()
                self._journal_file = None
