"""Shared domain types and URL normalization.

Every store and worker in the system keys on the normalized URL string
produced here, so the canonicalization rules below are load-bearing:
blacklist membership, cache hits, and queue dedup all assume both sides
went through :func:`normalize`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from urllib.parse import urlsplit

from .suffixes import registrable_domain

__all__ = [
    "UnparseableUrl",
    "UrlRecord",
    "VerdictStatus",
    "VerdictSource",
    "Verdict",
    "WebpageContent",
    "DetectBatch",
    "normalize",
    "registrable_domain",
    "utcnow",
]


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


class UnparseableUrl(ValueError):
    """Raised when a raw URL has no recognizable host."""


_HOST_RE = re.compile(r"^[a-z0-9._-]+$")


@dataclass(frozen=True)
class UrlRecord:
    """A URL in both submitted and canonical form; the unit of work."""

    raw: str
    normalized: str
    host: str
    registrable_domain: str


class VerdictStatus(str, Enum):
    BENIGN = "benign"
    PHISHING = "phishing"
    PENDING = "pending"
    ERROR = "error"


class VerdictSource(str, Enum):
    LOCAL_BLACKLIST = "local_blacklist"
    CACHE = "cache"
    ONLINE_BLACKLIST = "online_blacklist"
    RBPD = "rbpd"
    USER_FEEDBACK = "user_feedback"
    NONE = "none"


@dataclass(frozen=True)
class Verdict:
    """A classification outcome with source attribution."""

    status: VerdictStatus
    source: VerdictSource
    decided_at: datetime
    target_brand: str | None = None
    detail: str | None = None


@dataclass(frozen=True)
class WebpageContent:
    """Fetched page data handed to the detector.

    The screenshot slot exists for interface completeness; this service
    does HTML-only analysis and never populates it.
    """

    url: UrlRecord
    html: str
    fetched_at: datetime
    fetch_ms: int
    screenshot: bytes | None = None

    def __post_init__(self) -> None:
        if self.fetch_ms < 0:
            raise ValueError("fetch_ms must be non-negative")


@dataclass(frozen=True)
class DetectBatch:
    """An ordered batch of URLs; responses stay positionally aligned."""

    urls: tuple[UrlRecord, ...]
    submitted_at: datetime = field(default_factory=utcnow)

    def __post_init__(self) -> None:
        if not self.urls:
            raise ValueError("batch must contain at least one URL")


def normalize(raw: str) -> UrlRecord:
    """Canonicalize a raw URL string.

    Rules: scheme and host lowercased; scheme defaults to https when
    absent; default ports stripped; fragment dropped; trailing slashes on
    the path dropped; path and query otherwise preserved byte-exactly.

    Raises UnparseableUrl when no recognizable host can be extracted.
    """
    raw = raw.strip()
    if not raw:
        raise UnparseableUrl("empty URL")

    # Anything with an explicit scheme prefix is parsed as-is; only truly
    # scheme-less inputs get the https default.
    # Dotless prefix only: "host.tld:8080" is a port, not a scheme.
    has_scheme = re.match(r"^[a-zA-Z][a-zA-Z0-9+-]*:", raw) is not None
    candidate = raw if has_scheme else "https://" + raw
    try:
        parts = urlsplit(candidate)
    except ValueError as exc:
        raise UnparseableUrl(f"unparseable URL: {raw!r}") from exc

    scheme = parts.scheme.lower()
    if scheme not in ("http", "https"):
        raise UnparseableUrl(f"unsupported scheme: {scheme!r}")

    host = (parts.hostname or "").lower()
    if not host or not _HOST_RE.match(host) or not any(c.isalnum() for c in host):
        raise UnparseableUrl(f"no recognizable host in {raw!r}")

    try:
        port = parts.port
    except ValueError as exc:
        raise UnparseableUrl(f"invalid port in {raw!r}") from exc
    default_port = 80 if scheme == "http" else 443
    authority = host if port in (None, default_port) else f"{host}:{port}"

    path = parts.path.rstrip("/")
    normalized = f"{scheme}://{authority}{path}"
    if parts.query:
        normalized += "?" + parts.query

    return UrlRecord(
        raw=raw,
        normalized=normalized,
        host=host,
        registrable_domain=registrable_domain(host),
    )
