"""Verdict cache: TTL'd, source-precedence-aware, journaled to disk.

Precedence is the one subtle rule: a user-feedback entry can only be
replaced by newer user feedback. Everything else is last-write-wins with
a per-source TTL. Pending is never cached.

The journal is append-only, one accepted put per line; replaying it
through the same precedence logic reproduces the in-memory state after a
restart, which keeps the dashboard's trend history alive.
"""

from __future__ import annotations

import threading
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path
from typing import Callable

from .model import UrlRecord, Verdict, VerdictSource, VerdictStatus, utcnow

PHISHING_SOURCES = (
    VerdictSource.LOCAL_BLACKLIST,
    VerdictSource.ONLINE_BLACKLIST,
    VerdictSource.RBPD,
    VerdictSource.USER_FEEDBACK,
)


class PendingRejected(ValueError):
    """Pending verdicts are transient and must never be cached."""


@dataclass(frozen=True)
class CacheEntry:
    key: str
    verdict: Verdict
    expires_at: datetime | None


@dataclass(frozen=True)
class StatsReport:
    unique_phishing_count: int
    per_brand_counts: list[tuple[str, int]]
    per_day_phishing_counts: dict[str, int]
    source_distribution: dict[str, float]


def _encode(entry: CacheEntry) -> str:
    v = entry.verdict
    fields = [
        ("key", entry.key),
        ("status", v.status.value),
        ("source", v.source.value),
        ("target_brand", v.target_brand or ""),
        ("decided_at", v.decided_at.isoformat()),
        ("expires_at", entry.expires_at.isoformat() if entry.expires_at else ""),
    ]
    return "\t".join(f"{k}={val}" for k, val in fields)


def _decode(line: str) -> CacheEntry:
    kv: dict[str, str] = {}
    for part in line.rstrip("\n").split("\t"):
        k, _, val = part.partition("=")
        kv[k] = val
    verdict = Verdict(
        status=VerdictStatus(kv["status"]),
        source=VerdictSource(kv["source"]),
        decided_at=datetime.fromisoformat(kv["decided_at"]),
        target_brand=kv["target_brand"] or None,
    )
    expires = datetime.fromisoformat(kv["expires_at"]) if kv.get("expires_at") else None
    return CacheEntry(key=kv["key"], verdict=verdict, expires_at=expires)


class VerdictCache:
    def __init__(
        self,
        journal_path: str | Path | None = None,
        ttl_rbpd_days: float = 7.0,
        ttl_error_hours: float = 1.0,
        clock: Callable[[], datetime] = utcnow,
    ):
        self._lock = threading.RLock()
        self._entries: dict[str, CacheEntry] = {}
        self._clock = clock
        self._ttl_terminal = timedelta(days=ttl_rbpd_days)
        self._ttl_error = timedelta(hours=ttl_error_hours)
        self._journal_path = Path(journal_path) if journal_path else None
        self._journal_file = None
        if self._journal_path is not None:
            if self._journal_path.exists():
                self._replay()
            self._journal_path.parent.mkdir(parents=True, exist_ok=True)
            self._journal_file = self._journal_path.open("a", encoding="utf-8")

    def _replay(self) -> None:
        assert self._journal_path is not None
        with self._journal_path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                entry = _decode(line)
                self._apply(entry)

    def _apply(self, entry: CacheEntry) -> bool:
        """Precedence check + insert; caller holds the lock or is init."""
        existing = self._entries.get(entry.key)
        if (
            existing is not None
            and existing.verdict.source == VerdictSource.USER_FEEDBACK
            and entry.verdict.source != VerdictSource.USER_FEEDBACK
        ):
            return False
        self._entries[entry.key] = entry
        return True

    def _expiry_for(self, verdict: Verdict) -> datetime | None:
        if verdict.source == VerdictSource.USER_FEEDBACK:
            return None
        if verdict.status == VerdictStatus.ERROR:
            return verdict.decided_at + self._ttl_error
        return verdict.decided_at + self._ttl_terminal

    def put(self, url: UrlRecord, verdict: Verdict) -> bool:
        if verdict.status == VerdictStatus.PENDING:
            raise PendingRejected("pending verdicts are not cacheable")
        entry = CacheEntry(
            key=url.normalized, verdict=verdict, expires_at=self._expiry_for(verdict)
        )
        with self._lock:
            accepted = self._apply(entry)
            if accepted and self._journal_file is not None:
                self._journal_file.write(_encode(entry) + "\n")
                self._journal_file.flush()
        return accepted

    def get(self, url: UrlRecord) -> Verdict | None:
        entry = self._entries.get(url.normalized)
        if entry is None:
            return None
        if entry.expires_at is not None and entry.expires_at <= self._clock():
            return None
        return entry.verdict

    def __len__(self) -> int:
        return len(self._entries)

    def _live_entries(self) -> list[CacheEntry]:
        now = self._clock()
        with self._lock:
            return [
                e
                for e in self._entries.values()
                if e.expires_at is None or e.expires_at > now
            ]

    def aggregate_stats(self, window_days: int) -> StatsReport:
        if window_days < 1:
            raise ValueError("window_days must be >= 1")
        now = self._clock()
        cutoff = now - timedelta(days=window_days)
        brand_counts: Counter[str] = Counter()
        day_counts: dict[str, int] = defaultdict(int)
        source_counts: Counter[VerdictSource] = Counter()
        phishing = 0
        for entry in self._live_entries():
            v = entry.verdict
            if v.status != VerdictStatus.PHISHING or v.decided_at < cutoff:
                continue
            phishing += 1
            day_counts[v.decided_at.date().isoformat()] += 1
            if v.target_brand:
                brand_counts[v.target_brand] += 1
            if v.source in PHISHING_SOURCES:
                source_counts[v.source] += 1
        total_sourced = sum(source_counts.values())
        distribution = {
            src.value: count / total_sourced for src, count in source_counts.items()
        }
        per_brand = sorted(brand_counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return StatsReport(
            unique_phishing_count=phishing,
            per_brand_counts=per_brand,
            per_day_phishing_counts=dict(day_counts),
            source_distribution=distribution,
        )

    def close(self) -> None:
        with self._lock:
            if self._journal_file is not None:
                self._journal_file.close()
                self._journal_file = None
