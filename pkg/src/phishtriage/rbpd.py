"""Reference-based phishing detection over static HTML.

The detector infers which brand a page claims to be (its "brand
intention") from seven HTML signals, then checks whether the page's
registrable domain is among that brand's legitimate domains. A brand
claim at a foreign domain is phishing; no claim, or a claim at the right
domain, is benign. Attackers can copy a brand's look but cannot serve it
from the brand's real domain, which is what makes this check sound.

Scoring table (each signal kind fires at most once per brand):

    Title, MetaSiteName            3
    LogoAlt, CopyrightLine,
    FormActionDomain               2
    AnchorDomain, KeywordFrequency 1

Highest total wins if it reaches the threshold (3); ties break to the
lexicographically smallest canonical brand name. Any richer detector can
replace this one behind the same analyze() interface.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from html.parser import HTMLParser
from pathlib import Path
from typing import Protocol
from urllib.parse import urlsplit

from .model import (
    UrlRecord,
    Verdict,
    VerdictSource,
    VerdictStatus,
    WebpageContent,
    utcnow,
)
from .suffixes import registrable_domain

SCORE_THRESHOLD = 3
KEYWORD_MIN_COUNT = 3


class SignalKind(Enum):
    TITLE = "title"
    META_SITE_NAME = "meta_site_name"
    LOGO_ALT = "logo_alt"
    COPYRIGHT_LINE = "copyright_line"
    FORM_ACTION_DOMAIN = "form_action_domain"
    ANCHOR_DOMAIN = "anchor_domain"
    KEYWORD_FREQUENCY = "keyword_frequency"


SIGNAL_WEIGHTS: dict[SignalKind, int] = {
    SignalKind.TITLE: 3,
    SignalKind.META_SITE_NAME: 3,
    SignalKind.LOGO_ALT: 2,
    SignalKind.COPYRIGHT_LINE: 2,
    SignalKind.FORM_ACTION_DOMAIN: 2,
    SignalKind.ANCHOR_DOMAIN: 1,
    SignalKind.KEYWORD_FREQUENCY: 1,
}

_COPYRIGHT_MARKERS = ("©", "copyright", "(c)")


class KbInvalid(ValueError):
    pass


@dataclass(frozen=True)
class BrandKbEntry:
    brand: str
    aliases: frozenset[str]
    domains: frozenset[str]


@dataclass(frozen=True)
class BrandIntention:
    brand: str | None
    score: int
    evidence: tuple[tuple[SignalKind, str], ...] = ()


class RbpdDetector(Protocol):
    def analyze(self, url: UrlRecord, content: WebpageContent) -> Verdict: ...


def kb_load(path: str | Path) -> dict[str, BrandKbEntry]:
    """Load and validate the brand knowledge base.

    Line format: <brand> <tab> aliases=<comma-list> <tab> domains=<comma-list>
    Aliases match case-insensitively and must be unique across brands.
    """
    path = Path(path)
    kb: dict[str, BrandKbEntry] = {}
    alias_owner: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise KbInvalid(f"line {lineno}: expected brand<TAB>aliases=..<TAB>domains=..")
        brand = parts[0].strip()
        fields = {}
        for part in parts[1:]:
            k, _, v = part.partition("=")
            fields[k.strip()] = v
        if not brand or "aliases" not in fields or "domains" not in fields:
            raise KbInvalid(f"line {lineno}: missing brand, aliases or domains")
        if brand in kb:
            raise KbInvalid(f"line {lineno}: duplicate brand {brand!r}")
        aliases = {a.strip().lower() for a in fields["aliases"].split(",") if a.strip()}
        aliases.add(brand.lower())
        domains = {d.strip().lower() for d in fields["domains"].split(",") if d.strip()}
        if not domains:
            raise KbInvalid(f"line {lineno}: brand {brand!r} has no domains")
        for alias in aliases:
            if alias in alias_owner:
                raise KbInvalid(
                    f"line {lineno}: alias {alias!r} already owned by {alias_owner[alias]!r}"
                )
            alias_owner[alias] = brand
        kb[brand] = BrandKbEntry(
            brand=brand, aliases=frozenset(aliases), domains=frozenset(domains)
        )
    return kb


@dataclass
class PageSignals:
    """Raw material for scoring, pulled out of the HTML in one parse."""

    title: str = ""
    meta_site_names: list[str] = field(default_factory=list)
    logo_alts: list[str] = field(default_factory=list)
    form_action_hosts: list[str] = field(default_factory=list)
    anchor_hosts: list[str] = field(default_factory=list)
    visible_text: str = ""


class _SignalParser(HTMLParser):
    _SKIP = {"script", "style", "noscript"}

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.signals = PageSignals()
        self._text_parts: list[str] = []
        self._in_title = False
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        if tag in self._SKIP:
            self._skip_depth += 1
        elif tag == "title":
            self._in_title = True
        elif tag == "meta":
            prop = (attrs.get("property") or attrs.get("name") or "").lower()
            content = attrs.get("content") or ""
            if prop in ("og:site_name", "application-name", "site_name") and content:
                self.signals.meta_site_names.append(content)
        elif tag == "img":
            alt = attrs.get("alt") or ""
            if alt:
                self.signals.logo_alts.append(alt)
        elif tag == "form":
            host = _host_of(attrs.get("action") or "")
            if host:
                self.signals.form_action_hosts.append(host)
        elif tag == "a":
            host = _host_of(attrs.get("href") or "")
            if host:
                self.signals.anchor_hosts.append(host)

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip_depth > 0:
            self._skip_depth -= 1
        elif tag == "title":
            self._in_title = False

    def handle_data(self, data):
        if self._skip_depth:
            return
        if self._in_title:
            self.signals.title += data
        self._text_parts.append(data)

    def finish(self) -> PageSignals:
        self.signals.visible_text = " ".join(
            part.strip() for part in self._text_parts if part.strip()
        )
        return self.signals


def _host_of(url: str) -> str:
    url = url.strip()
    if not url:
        return ""
    if "://" not in url:
        if url.startswith("//"):
            url = "https:" + url
        elif url.startswith(("/", "#", "?")):
            return ""
        else:
            url = "https://" + url
    try:
        return (urlsplit(url).hostname or "").lower()
    except ValueError:
        return ""


def extract_signals(html: str) -> PageSignals:
    parser = _SignalParser()
    parser.feed(html)
    return parser.finish()


def _alias_in(alias: str, text: str) -> bool:
    return alias in text.lower()


def _keyword_count(alias: str, text: str) -> int:
    return len(re.findall(rf"\b{re.escape(alias)}\b", text, flags=re.IGNORECASE))


def extract_brand_intention(
    content: WebpageContent, kb: dict[str, BrandKbEntry]
) -> BrandIntention:
    signals = extract_signals(content.html)
    best: BrandIntention | None = None
    for brand in sorted(kb):
        entry = kb[brand]
        evidence: list[tuple[SignalKind, str]] = []

        def first_hit(kind: SignalKind, texts: list[str]) -> None:
            for text in texts:
                for alias in sorted(entry.aliases):
                    if _alias_in(alias, text):
                        evidence.append((kind, text))
                        return

        first_hit(SignalKind.TITLE, [signals.title] if signals.title else [])
        first_hit(SignalKind.META_SITE_NAME, signals.meta_site_names)
        first_hit(SignalKind.LOGO_ALT, signals.logo_alts)
        copyright_lines = [
            seg
            for seg in re.split(r"[\n\.]", signals.visible_text)
            if any(m in seg.lower() for m in _COPYRIGHT_MARKERS)
        ]
        first_hit(SignalKind.COPYRIGHT_LINE, copyright_lines)
        first_hit(SignalKind.FORM_ACTION_DOMAIN, signals.form_action_hosts)
        first_hit(SignalKind.ANCHOR_DOMAIN, signals.anchor_hosts)
        if any(
            _keyword_count(alias, signals.visible_text) >= KEYWORD_MIN_COUNT
            for alias in entry.aliases
        ):
            evidence.append((SignalKind.KEYWORD_FREQUENCY, "visible text"))

        score = sum(SIGNAL_WEIGHTS[kind] for kind, _ in evidence)
        if score >= SCORE_THRESHOLD and (best is None or score > best.score):
            best = BrandIntention(brand=brand, score=score, evidence=tuple(evidence))
    if best is None:
        return BrandIntention(brand=None, score=0)
    return best


def classify(
    url: UrlRecord, content: WebpageContent, kb: dict[str, BrandKbEntry]
) -> Verdict:
    """Benign unless the page claims a brand it is not served from."""
    intention = extract_brand_intention(content, kb)
    if intention.brand is None:
        return Verdict(
            status=VerdictStatus.BENIGN, source=VerdictSource.RBPD, decided_at=utcnow()
        )
    page_domain = registrable_domain(url.host)
    if page_domain in kb[intention.brand].domains:
        return Verdict(
            status=VerdictStatus.BENIGN, source=VerdictSource.RBPD, decided_at=utcnow()
        )
    detail = "; ".join(f"{kind.value}: {text[:80]}" for kind, text in intention.evidence)
    return Verdict(
        status=VerdictStatus.PHISHING,
        source=VerdictSource.RBPD,
        decided_at=utcnow(),
        target_brand=intention.brand,
        detail=detail,
    )


class ReferenceDetector:
    """Default RbpdDetector backed by classify()."""

    def __init__(self, kb: dict[str, BrandKbEntry]):
        self.kb = kb

    def analyze(self, url: UrlRecord, content: WebpageContent) -> Verdict:
        return classify(url, content, self.kb)
