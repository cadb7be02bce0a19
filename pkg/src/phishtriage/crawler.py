"""Timeout-bounded webpage fetcher with two interchangeable backends.

The live backend does plain HTTP (no script execution); the corpus
backend resolves fetches against a manifest of local HTML fixtures with
optional simulated delays and injected errors, which is what every test
and the bench harness use.

The content's url field carries the final post-redirect URL: that is
what the detector compares domains against, so redirectors cannot
launder a phishing domain.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Protocol

import requests

from .model import UnparseableUrl, UrlRecord, WebpageContent, normalize, utcnow

MAX_REDIRECTS = 5
DEFAULT_TIMEOUT_SECS = 10.0
DEFAULT_MAX_BYTES = 2 * 1024 * 1024


class FetchErrorKind(Enum):
    TIMEOUT = "timeout"
    DNS = "dns"
    CONNECT = "connect"
    HTTP_STATUS = "http_status"
    TOO_LARGE = "too_large"


@dataclass(frozen=True)
class FetchOutcome:
    content: WebpageContent | None = None
    error: FetchErrorKind | None = None
    status_code: int | None = None

    def __post_init__(self) -> None:
        if (self.content is None) == (self.error is None):
            raise ValueError("exactly one of content/error must be set")


class Fetcher(Protocol):
    def fetch(
        self,
        url: UrlRecord,
        timeout: float = DEFAULT_TIMEOUT_SECS,
        max_bytes: int = DEFAULT_MAX_BYTES,
    ) -> FetchOutcome: ...


class ManifestInvalid(ValueError):
    pass


class HttpFetcher:
    """Live backend; connection pooling via a shared session."""

    def __init__(self) -> None:
        self._session = requests.Session()
        self._session.max_redirects = MAX_REDIRECTS

    def fetch(
        self,
        url: UrlRecord,
        timeout: float = DEFAULT_TIMEOUT_SECS,
        max_bytes: int = DEFAULT_MAX_BYTES,
    ) -> FetchOutcome:
        start = time.monotonic()
        try:
            resp = self._session.get(url.normalized, timeout=timeout, stream=True)
        except requests.Timeout:
            return FetchOutcome(error=FetchErrorKind.TIMEOUT)
        except requests.TooManyRedirects:
            return FetchOutcome(error=FetchErrorKind.CONNECT)
        except requests.ConnectionError as exc:
            kind = (
                FetchErrorKind.DNS
                if "name" in str(exc).lower() or "resolution" in str(exc).lower()
                else FetchErrorKind.CONNECT
            )
            return FetchOutcome(error=kind)
        except requests.RequestException:
            return FetchOutcome(error=FetchErrorKind.CONNECT)
        with resp:
            if resp.status_code >= 400:
                return FetchOutcome(
                    error=FetchErrorKind.HTTP_STATUS, status_code=resp.status_code
                )
            body = bytearray()
            try:
                for chunk in resp.iter_content(chunk_size=65536):
                    body.extend(chunk)
                    if len(body) >= max_bytes:
                        break
                    if time.monotonic() - start > timeout:
                        return FetchOutcome(error=FetchErrorKind.TIMEOUT)
            except requests.Timeout:
                return FetchOutcome(error=FetchErrorKind.TIMEOUT)
            try:
                final_url = normalize(resp.url)
            except UnparseableUrl:
                final_url = url
        elapsed_ms = int((time.monotonic() - start) * 1000)
        html = body[:max_bytes].decode(resp.encoding or "utf-8", errors="replace")
        return FetchOutcome(
            content=WebpageContent(
                url=final_url, html=html, fetched_at=utcnow(), fetch_ms=elapsed_ms
            )
        )


@dataclass(frozen=True)
class CorpusEntry:
    html_path: Path
    delay_ms: int = 0
    error: FetchErrorKind | None = None


class CorpusFetcher:
    """Deterministic backend over a manifest of local fixture pages.

    Unmapped URLs resolve as DNS errors by convention. An extra
    default_delay_ms applies on top of per-entry delays, which is how the
    bench simulates crawl latency uniformly.
    """

    def __init__(self, entries: dict[str, CorpusEntry], default_delay_ms: int = 0):
        self._entries = entries
        self._default_delay_ms = default_delay_ms

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, normalized_url: str) -> bool:
        return normalized_url in self._entries

    def fetch(
        self,
        url: UrlRecord,
        timeout: float = DEFAULT_TIMEOUT_SECS,
        max_bytes: int = DEFAULT_MAX_BYTES,
    ) -> FetchOutcome:
        start = time.monotonic()
        entry = self._entries.get(url.normalized)
        if entry is None:
            return FetchOutcome(error=FetchErrorKind.DNS)
        if entry.error is not None:
            if entry.error == FetchErrorKind.TIMEOUT:
                time.sleep(timeout)
            return FetchOutcome(error=entry.error)
        delay = (entry.delay_ms + self._default_delay_ms) / 1000.0
        if delay > timeout:
            time.sleep(timeout)
            return FetchOutcome(error=FetchErrorKind.TIMEOUT)
        if delay > 0:
            time.sleep(delay)
        html = entry.html_path.read_bytes()[:max_bytes].decode("utf-8", errors="replace")
        elapsed_ms = int((time.monotonic() - start) * 1000)
        return FetchOutcome(
            content=WebpageContent(
                url=url, html=html, fetched_at=utcnow(), fetch_ms=elapsed_ms
            )
        )


def corpus_load(manifest_path: str | Path, default_delay_ms: int = 0) -> CorpusFetcher:
    """Parse a corpus manifest.

    Line format: <normalized-url> <tab> <html-path> [<tab> delay_ms=<n>|error=<kind>]
    Paths are resolved relative to the manifest's directory.
    """
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    entries: dict[str, CorpusEntry] = {}
    try:
        lines = manifest_path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ManifestInvalid(f"manifest unreadable: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise ManifestInvalid(f"line {lineno}: expected at least url<TAB>path")
        try:
            key = normalize(parts[0]).normalized
        except UnparseableUrl as exc:
            raise ManifestInvalid(f"line {lineno}: bad URL {parts[0]!r}") from exc
        html_path = base / parts[1]
        delay_ms = 0
        error: FetchErrorKind | None = None
        for extra in parts[2:]:
            k, _, v = extra.partition("=")
            if k == "delay_ms":
                delay_ms = int(v)
            elif k == "error":
                try:
                    error = FetchErrorKind(v.lower())
                except ValueError as exc:
                    raise ManifestInvalid(f"line {lineno}: unknown error {v!r}") from exc
            else:
                raise ManifestInvalid(f"line {lineno}: unknown option {extra!r}")
        if error is None and not html_path.is_file():
            raise ManifestInvalid(f"line {lineno}: missing html file {html_path}")
        entries[key] = CorpusEntry(html_path=html_path, delay_ms=delay_ms, error=error)
    return CorpusFetcher(entries, default_delay_ms=default_delay_ms)
