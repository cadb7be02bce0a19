from __future__ import annotations

from pathlib import Path

import pytest

from phishtriage.blacklist import BlacklistStore
from phishtriage.cache import VerdictCache
from phishtriage.ftw import FastTaskWorker
from phishtriage.rbpd import kb_load
from phishtriage.taskqueue import TaskQueue

KB_TEXT = """\
# brand knowledge base fixture
PayPal\taliases=paypal\tdomains=paypal.com
Chase\taliases=chase,chase bank\tdomains=chase.com
Microsoft\taliases=microsoft,office365\tdomains=microsoft.com,live.com
"""


@pytest.fixture
def kb_path(tmp_path: Path) -> Path:
    path = tmp_path / "kb.tsv"
    path.write_text(KB_TEXT, encoding="utf-8")
    return path


@pytest.fixture
def kb(kb_path: Path):
    return kb_load(kb_path)


@pytest.fixture
def blacklist() -> BlacklistStore:
    return BlacklistStore()


@pytest.fixture
def cache() -> VerdictCache:
    return VerdictCache()


@pytest.fixture
def queue() -> TaskQueue:
    return TaskQueue(capacity=100)


@pytest.fixture
def ftw(blacklist, cache, queue) -> FastTaskWorker:
    return FastTaskWorker(blacklist, cache, queue)


def write_corpus(tmp_path: Path, pages: dict[str, str], extras: dict[str, str] | None = None) -> Path:
    """Write fixture pages plus a manifest; extras maps url -> option string."""
    pages_dir = tmp_path / "pages"
    pages_dir.mkdir(exist_ok=True)
    lines = []
    for i, (url, html) in enumerate(pages.items()):
        name = f"page_{i:03d}.html"
        (pages_dir / name).write_text(html, encoding="utf-8")
        line = f"{url}\tpages/{name}"
        if extras and url in extras:
            line += f"\t{extras[url]}"
        lines.append(line)
    manifest = tmp_path / "corpus.manifest"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest
