"""Fast task worker: the request-path pipeline.

Answers each URL from stores already in memory or hands it to the slow
queue with a Pending verdict. Never touches the network.

Precedence: user feedback in the cache outranks the blacklist. The
blacklist is otherwise checked first, then the rest of the cache. This
lets an approved correction fix a blacklist false positive instead of
being shadowed forever.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blacklist import BlacklistStore
from .cache import VerdictCache
from .model import (
    UnparseableUrl,
    UrlRecord,
    Verdict,
    VerdictSource,
    VerdictStatus,
    normalize,
    utcnow,
)
from .taskqueue import TaskQueue


@dataclass(frozen=True)
class FtwConfig:
    worker_count: int = 8

    def __post_init__(self) -> None:
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")


class FastTaskWorker:
    def __init__(self, blacklist: BlacklistStore, cache: VerdictCache, queue: TaskQueue):
        self._blacklist = blacklist
        self._cache = cache
        self._queue = queue

    def process_one(self, url: UrlRecord) -> Verdict:
        cached = self._cache.get(url)
        if cached is not None and cached.source == VerdictSource.USER_FEEDBACK:
            return cached
        if self._blacklist.contains(url):
            return Verdict(
                status=VerdictStatus.PHISHING,
                source=VerdictSource.LOCAL_BLACKLIST,
                decided_at=utcnow(),
            )
        if cached is not None:
            return cached
        self._queue.enqueue(url)
        # On Full the URL is untracked and the client must resubmit;
        # the answer is Pending either way.
        return Verdict(
            status=VerdictStatus.PENDING,
            source=VerdictSource.NONE,
            decided_at=utcnow(),
        )

    def process_raw(self, raw: str) -> Verdict:
        try:
            url = normalize(raw)
        except UnparseableUrl:
            return Verdict(
                status=VerdictStatus.ERROR,
                source=VerdictSource.NONE,
                decided_at=utcnow(),
                detail="unparseable",
            )
        return self.process_one(url)

    def process_batch(self, raws: list[str]) -> list[Verdict]:
        """Element-wise detection; duplicates share one decision."""
        decided: dict[str, Verdict] = {}
        out: list[Verdict] = []
        for raw in raws:
            try:
                key = normalize(raw).normalized
            except UnparseableUrl:
                key = raw
            if key not in decided:
                decided[key] = self.process_raw(raw)
            out.append(decided[key])
        return out
