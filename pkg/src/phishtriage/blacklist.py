"""In-memory local blacklist with periodic feed synchronization.

Readers hit an immutable snapshot; the sync loop builds a complete new
snapshot off to the side and swaps it in with a single reference
assignment, so `contains` never blocks and never sees a partial load.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable

from .model import UnparseableUrl, UrlRecord, normalize, utcnow

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlacklistSnapshot:
    entries: frozenset[str]
    version: int
    loaded_at: datetime
    feed_name: str
    skipped_count: int = 0


def parse_feed(lines: Iterable[str], version: int, feed_name: str) -> BlacklistSnapshot:
    """Normalize a newline-delimited URL feed into a snapshot.

    '#' lines are comments; unparseable lines are counted and skipped.
    """
    entries: set[str] = set()
    skipped = 0
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            entries.add(normalize(line).normalized)
        except UnparseableUrl:
            skipped += 1
    return BlacklistSnapshot(
        entries=frozenset(entries),
        version=version,
        loaded_at=utcnow(),
        feed_name=feed_name,
        skipped_count=skipped,
    )


class BlacklistStore:
    """Many concurrent readers, one background writer, atomic swap."""

    def __init__(self, feed_path: str | Path | None = None):
        self._feed_path = Path(feed_path) if feed_path else None
        self._snapshot = BlacklistSnapshot(
            entries=frozenset(), version=0, loaded_at=utcnow(), feed_name="<empty>"
        )
        self._load_lock = threading.Lock()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    @property
    def snapshot(self) -> BlacklistSnapshot:
        return self._snapshot

    @property
    def version(self) -> int:
        return self._snapshot.version

    def load_feed(self, path: str | Path | None = None) -> BlacklistSnapshot:
        """Load (or reload) the feed; on I/O error the previous snapshot stays."""
        feed = Path(path) if path is not None else self._feed_path
        if feed is None:
            raise ValueError("no feed path configured")
        with self._load_lock:
            try:
                lines = feed.read_text(encoding="utf-8").splitlines()
            except OSError as exc:
                log.warning("blacklist feed %s unreadable, keeping snapshot v%d: %s",
                            feed, self._snapshot.version, exc)
                raise
            snapshot = parse_feed(lines, self._snapshot.version + 1, str(feed))
            self._snapshot = snapshot
        log.info("blacklist v%d loaded: %d entries, %d skipped",
                 snapshot.version, len(snapshot.entries), snapshot.skipped_count)
        return snapshot

    def load_lines(self, lines: Iterable[str], feed_name: str = "<inline>") -> BlacklistSnapshot:
        """Programmatic seeding path used by tests and the bench harness."""
        with self._load_lock:
            snapshot = parse_feed(lines, self._snapshot.version + 1, feed_name)
            self._snapshot = snapshot
        return snapshot

    def contains(self, url: UrlRecord) -> bool:
        return url.normalized in self._snapshot.entries

    def __len__(self) -> int:
        return len(self._snapshot.entries)

    def start_sync(self, interval_secs: float) -> None:
        """Start the background sync loop; per-iteration failures are logged."""
        if interval_secs <= 0:
            raise ValueError("sync interval must be positive")
        if self._thread is not None:
            raise RuntimeError("sync loop already running")
        self._stop.clear()

        def loop() -> None:
            while not self._stop.wait(interval_secs):
                try:
                    self.load_feed()
                except OSError:
                    pass  # previous snapshot stays in service

        self._thread = threading.Thread(target=loop, name="blacklist-sync", daemon=True)
        self._thread.start()

    def stop_sync(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None
