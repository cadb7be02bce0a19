"""Static public-suffix snapshot used for registrable-domain extraction.

A deliberately small, bundled snapshot: deterministic builds beat live
suffix-list fetching for this service. Hosts whose suffix is not listed
here fall back to last-two-labels, which is correct for the vast majority
of gTLDs anyway.
"""

from __future__ import annotations

# Multi-label public suffixes. Single-label TLDs need no entry: the
# last-two-labels fallback already handles them.
MULTI_LABEL_SUFFIXES: frozenset[str] = frozenset(
    {
        "co.uk",
        "org.uk",
        "gov.uk",
        "ac.uk",
        "net.uk",
        "sch.uk",
        "me.uk",
        "co.jp",
        "ne.jp",
        "or.jp",
        "ac.jp",
        "go.jp",
        "com.au",
        "net.au",
        "org.au",
        "edu.au",
        "gov.au",
        "co.nz",
        "net.nz",
        "org.nz",
        "govt.nz",
        "com.br",
        "net.br",
        "org.br",
        "gov.br",
        "com.cn",
        "net.cn",
        "org.cn",
        "gov.cn",
        "co.in",
        "net.in",
        "org.in",
        "com.sg",
        "edu.sg",
        "gov.sg",
        "com.my",
        "com.hk",
        "com.tw",
        "co.kr",
        "or.kr",
        "co.id",
        "com.vn",
        "com.ph",
        "com.mx",
        "com.ar",
        "com.tr",
        "co.za",
        "org.za",
        "com.co",
        "com.pe",
        "com.ve",
        "co.th",
        "com.eg",
        "com.sa",
        "com.pk",
        "com.bd",
        "com.ng",
        "co.ke",
        "com.ua",
        "com.pl",
        "co.il",
    }
)


def registrable_domain(host: str) -> str:
    """Return the eTLD+1 of a lowercased host.

    Unknown suffixes fall back to last-two-labels; single-label hosts
    (and IP-address-looking hosts) are returned unchanged.
    """
    labels = host.split(".")
    if len(labels) < 2:
        return host
    if all(label.isdigit() for label in labels):
        return host
    # Longest listed suffix wins; eTLD+1 adds one label in front of it.
    for start in range(len(labels) - 1):
        suffix = ".".join(labels[start:])
        if suffix in MULTI_LABEL_SUFFIXES:
            if start == 0:
                return host
            return ".".join(labels[start - 1 :])
    return ".".join(labels[-2:])
