"""URL extraction from free text (email bodies, pasted notes).

Rules: candidates are delimited by whitespace, brackets and quotes; an
explicit http(s) scheme always qualifies; scheme-less tokens qualify
when they look like a host (dotted alnum labels, alphabetic TLD of 2+
chars), optionally followed by a path or query; bare filenames whose
"TLD" is a common file extension are rejected. Trailing sentence
punctuation is stripped. Output is deduped in first-occurrence order.
"""

from __future__ import annotations

import re

_DELIMS = re.compile(r"[\s<>\[\]{}()\"'`|,;]+")
_TRAILING_PUNCT = ".,;:!?)]}>'\""
_SCHEMED = re.compile(r"^https?://\S+$", re.IGNORECASE)
_HOST_LIKE = re.compile(
    r"^(?:[A-Za-z0-9](?:[A-Za-z0-9-]*[A-Za-z0-9])?\.)+"  # dotted labels
    r"[A-Za-z]{2,}"                                       # alphabetic TLD
    r"(?:[:/?]\S*)?$"                                     # optional port/path/query
)
_FILE_EXTENSIONS = frozenset(
    "txt md html htm pdf png jpg jpeg gif svg zip tar gz exe doc docx xls "
    "xlsx ppt pptx csv json xml yaml yml py js ts css mp3 mp4 mov".split()
)


def _looks_like_filename(token: str) -> bool:
    if "/" in token or ":" in token:
        return False
    return token.rsplit(".", 1)[-1].lower() in _FILE_EXTENSIONS


def extract_urls(text: str) -> list[str]:
    seen: set[str] = set()
    out: list[str] = []
    for token in _DELIMS.split(text):
        token = token.strip().rstrip(_TRAILING_PUNCT)
        if not token:
            continue
        if not (_SCHEMED.match(token) or _HOST_LIKE.match(token)):
            continue
        if not _SCHEMED.match(token) and _looks_like_filename(token):
            continue
        if token not in seen:
            seen.add(token)
            out.append(token)
    return out
