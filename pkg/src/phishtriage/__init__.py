"""Tiered fast/slow phishing URL detection service."""

from .model import (
    DetectBatch,
    UnparseableUrl,
    UrlRecord,
    Verdict,
    VerdictSource,
    VerdictStatus,
    WebpageContent,
    normalize,
    registrable_domain,
)

__all__ = [
    "DetectBatch",
    "UnparseableUrl",
    "UrlRecord",
    "Verdict",
    "VerdictSource",
    "VerdictStatus",
    "WebpageContent",
    "normalize",
    "registrable_domain",
]
