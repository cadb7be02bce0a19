"""Bench harness: fast-slow vs sequential latency, and the split of
phishing reports between blacklist hits and content detection.

Crawl and detector latencies are simulated through corpus delays so runs
are deterministic and desk-scale. Fast-slow latency counts the first
response (Pending is a response: it is what the user waits for); the
verdict-source distribution is computed after the queue drains, so both
metrics are measured the way they are experienced.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .blacklist import BlacklistStore
from .cache import VerdictCache
from .crawler import CorpusFetcher, corpus_load
from .ftw import FastTaskWorker
from .model import UrlRecord, Verdict, VerdictSource, VerdictStatus, normalize, utcnow
from .rbpd import BrandKbEntry, ReferenceDetector, classify, kb_load
from .stw import NullOnlineBlacklist, SlowTaskWorker, StwConfig, StwPool
from .taskqueue import TaskQueue


class ConfigInvalid(ValueError):
    pass


class FixtureMissing(ValueError):
    pass


@dataclass
class BenchConfig:
    mode: str  # fast-slow | sequential
    benign_list: Path
    phishing_list: Path
    blacklist_seed_fraction: float
    simulated_crawl_ms: int
    simulated_rbpd_ms: int
    output_path: Path
    kb_path: Path | None = None
    corpus_manifest: Path | None = None
    clients: int = 8
    stw_workers: int = 4
    drain_timeout_secs: float = 600.0

    def __post_init__(self) -> None:
        if self.mode not in ("fast-slow", "sequential"):
            raise ConfigInvalid(f"unknown mode {self.mode!r}")
        if not 0.0 <= self.blacklist_seed_fraction <= 1.0:
            raise ConfigInvalid("seed fraction must be in [0, 1]")


@dataclass
class BenchReport:
    mode: str
    n_requests: int
    mean_ms: float
    p50_ms: float
    p95_ms: float
    p99_ms: float
    source_distribution: dict[str, float]
    wall_time_ms: int

    def to_json(self) -> dict:
        return self.__dict__.copy()


@dataclass
class RequestSample:
    url: str
    ms: float
    status: str
    source: str


def _read_urls(path: Path) -> list[str]:
    if not path.is_file():
        raise ConfigInvalid(f"URL list not found: {path}")
    urls = [l.strip() for l in path.read_text(encoding="utf-8").splitlines()]
    urls = [u for u in urls if u and not u.startswith("#")]
    if not urls:
        raise ConfigInvalid(f"URL list empty: {path}")
    return urls


def percentile(sorted_values: list[float], p: float) -> float:
    if not sorted_values:
        return 0.0
    idx = max(0, math.ceil(p / 100.0 * len(sorted_values)) - 1)
    return sorted_values[idx]


DEFAULT_KB_LINES = [
    "PayPal\taliases=paypal\tdomains=paypal.com",
    "Chase\taliases=chase,chase bank\tdomains=chase.com",
    "Microsoft\taliases=microsoft,office365\tdomains=microsoft.com,live.com",
    "DHL\taliases=dhl\tdomains=dhl.com",
]


def write_default_kb(path: Path) -> Path:
    path.write_text("\n".join(DEFAULT_KB_LINES) + "\n", encoding="utf-8")
    return path


_PHISHING_PAGE = """<html><head><title>{brand} - Sign in</title></head>
<body>
<img src="logo.png" alt="{brand} logo">
<form action="https://{alias}.secure-auth.example/submit" method="post">
<input name="user"><input name="pass" type="password">
</form>
<p>&copy; {brand} Inc. All rights reserved.</p>
</body></html>
"""

_BENIGN_PAGE = """<html><head><title>Welcome to {host}</title></head>
<body><h1>{host}</h1><p>News, weather and more.</p></body></html>
"""


def gen_fixtures(
    benign_list: Path,
    phishing_list: Path,
    kb: dict[str, BrandKbEntry],
    out_dir: Path,
) -> Path:
    """Emit a fixture page per URL plus the corpus manifest linking them.

    Phishing URLs get pages with unmistakable brand intention (round-robin
    across KB brands); benign URLs get brandless pages.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    pages_dir = out_dir / "pages"
    pages_dir.mkdir(exist_ok=True)
    brands = sorted(kb)
    if not brands:
        raise ConfigInvalid("KB has no brands")
    manifest_lines: list[str] = []
    seen: set[str] = set()

    def add(key: str, filename: str, html: str) -> None:
        if key in seen:
            return
        seen.add(key)
        (pages_dir / filename).write_text(html, encoding="utf-8")
        manifest_lines.append(f"{key}\tpages/{filename}")

    for i, raw in enumerate(_read_urls(phishing_list)):
        record = normalize(raw)
        brand = brands[i % len(brands)]
        alias = sorted(kb[brand].aliases)[0]
        add(
            record.normalized,
            f"phish_{i:05d}.html",
            _PHISHING_PAGE.format(brand=brand, alias=alias),
        )
    for i, raw in enumerate(_read_urls(benign_list)):
        record = normalize(raw)
        add(record.normalized, f"benign_{i:05d}.html", _BENIGN_PAGE.format(host=record.host))

    manifest = out_dir / "corpus.manifest"
    manifest.write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    return manifest


class DelayedDetector:
    """Wraps the reference detector with a simulated inference delay."""

    def __init__(self, kb: dict[str, BrandKbEntry], delay_ms: int):
        self._inner = ReferenceDetector(kb)
        self._delay = delay_ms / 1000.0

    def analyze(self, url, content) -> Verdict:
        if self._delay > 0:
            time.sleep(self._delay)
        return self._inner.analyze(url, content)


def _seeded_blacklist(phishing: list[str], fraction: float) -> tuple[BlacklistStore, int]:
    count = int(len(phishing) * fraction)
    store = BlacklistStore()
    store.load_lines(phishing[:count], feed_name="bench-seed")
    return store, count


def run(config: BenchConfig) -> BenchReport:
    benign = _read_urls(config.benign_list)
    phishing = _read_urls(config.phishing_list)
    all_urls = benign + phishing

    if config.kb_path is not None:
        kb = kb_load(config.kb_path)
    else:
        raise ConfigInvalid("kb_path required")
    if config.corpus_manifest is None:
        raise FixtureMissing("corpus manifest required; run gen-fixtures first")
    fetcher = corpus_load(
        config.corpus_manifest, default_delay_ms=config.simulated_crawl_ms
    )
    for raw in all_urls:
        if normalize(raw).normalized not in fetcher:
            raise FixtureMissing(f"no fixture for {raw}")

    blacklist, _ = _seeded_blacklist(phishing, config.blacklist_seed_fraction)
    detector = DelayedDetector(kb, config.simulated_rbpd_ms)
    start_wall = time.monotonic()

    if config.mode == "fast-slow":
        samples, finals = _run_fast_slow(config, all_urls, blacklist, fetcher, detector)
    else:
        samples, finals = _run_sequential(config, all_urls, blacklist, fetcher, detector)

    wall_ms = int((time.monotonic() - start_wall) * 1000)
    latencies = sorted(s.ms for s in samples)
    phishing_finals = [v for v in finals.values() if v.status == VerdictStatus.PHISHING]
    distribution: dict[str, float] = {}
    if phishing_finals:
        for source in (
            VerdictSource.LOCAL_BLACKLIST,
            VerdictSource.ONLINE_BLACKLIST,
            VerdictSource.RBPD,
        ):
            count = sum(1 for v in phishing_finals if v.source == source)
            if count:
                distribution[source.value] = count / len(phishing_finals)

    report = BenchReport(
        mode=config.mode,
        n_requests=len(samples),
        mean_ms=sum(latencies) / len(latencies),
        p50_ms=percentile(latencies, 50),
        p95_ms=percentile(latencies, 95),
        p99_ms=percentile(latencies, 99),
        source_distribution=distribution,
        wall_time_ms=wall_ms,
    )
    _write_outputs(config, report, samples)
    return report


def _run_fast_slow(
    config: BenchConfig,
    urls: list[str],
    blacklist: BlacklistStore,
    fetcher: CorpusFetcher,
    detector: DelayedDetector,
) -> tuple[list[RequestSample], dict[str, Verdict]]:
    cache = VerdictCache()
    queue = TaskQueue(capacity=max(10_000, len(urls)))
    ftw = FastTaskWorker(blacklist, cache, queue)
    stw_config = StwConfig(worker_count=config.stw_workers, crawl_timeout_secs=3600)
    stw = SlowTaskWorker(queue, cache, fetcher, detector, NullOnlineBlacklist(), stw_config)
    pool = StwPool(stw, queue, stw_config)
    pool.start()

    def timed(raw: str) -> RequestSample:
        t0 = time.monotonic()
        verdict = ftw.process_raw(raw)
        ms = (time.monotonic() - t0) * 1000.0
        return RequestSample(raw, ms, verdict.status.value, verdict.source.value)

    with ThreadPoolExecutor(max_workers=config.clients) as pool_exec:
        samples = list(pool_exec.map(timed, urls))

    if not pool.drain(timeout=config.drain_timeout_secs):
        pool.stop()
        raise RuntimeError("queue failed to drain within the timeout")
    pool.stop()

    finals: dict[str, Verdict] = {}
    for raw in urls:
        finals[raw] = ftw.process_raw(raw)
    return samples, finals


def _run_sequential(
    config: BenchConfig,
    urls: list[str],
    blacklist: BlacklistStore,
    fetcher: CorpusFetcher,
    detector: DelayedDetector,
) -> tuple[list[RequestSample], dict[str, Verdict]]:
    online = NullOnlineBlacklist()
    finals: dict[str, Verdict] = {}

    def run_one(raw: str) -> RequestSample:
        t0 = time.monotonic()
        record = normalize(raw)
        if blacklist.contains(record):
            verdict = Verdict(
                status=VerdictStatus.PHISHING,
                source=VerdictSource.LOCAL_BLACKLIST,
                decided_at=utcnow(),
            )
        else:
            online.check(record)
            outcome = fetcher.fetch(record, timeout=3600)
            if outcome.error is not None:
                verdict = Verdict(
                    status=VerdictStatus.ERROR,
                    source=VerdictSource.NONE,
                    decided_at=utcnow(),
                    detail=outcome.error.value,
                )
            else:
                verdict = detector.analyze(outcome.content.url, outcome.content)
        ms = (time.monotonic() - t0) * 1000.0
        finals[raw] = verdict
        return RequestSample(raw, ms, verdict.status.value, verdict.source.value)

    with ThreadPoolExecutor(max_workers=config.clients) as pool_exec:
        samples = list(pool_exec.map(run_one, urls))
    return samples, finals


def _write_outputs(
    config: BenchConfig, report: BenchReport, samples: list[RequestSample]
) -> None:
    out = config.output_path
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8")
    csv_path = out.with_suffix(".csv")
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["url", "mode", "ms", "status", "source"])
        for s in samples:
            writer.writerow([s.url, report.mode, f"{s.ms:.3f}", s.status, s.source])


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a benchmark")
    p_run.add_argument("--mode", choices=["fast-slow", "sequential"], required=True)
    p_run.add_argument("--benign", type=Path, required=True)
    p_run.add_argument("--phishing", type=Path, required=True)
    p_run.add_argument("--seed-fraction", type=float, default=0.5)
    p_run.add_argument("--crawl-ms", type=int, default=500)
    p_run.add_argument("--rbpd-ms", type=int, default=50)
    p_run.add_argument("--out", type=Path, required=True)
    p_run.add_argument("--kb", type=Path, help="brand KB (a small default is generated if omitted)")
    p_run.add_argument("--corpus-manifest", type=Path,
                       help="fixture manifest (generated on the fly if omitted)")
    p_run.add_argument("--clients", type=int, default=8)
    p_run.add_argument("--stw-workers", type=int, default=4)

    p_gen = sub.add_parser("gen-fixtures", help="generate fixture pages + manifest")
    p_gen.add_argument("--benign", type=Path, required=True)
    p_gen.add_argument("--phishing", type=Path, required=True)
    p_gen.add_argument("--kb", type=Path)
    p_gen.add_argument("--out-dir", type=Path, required=True)

    args = parser.parse_args(argv)

    try:
        if args.command == "gen-fixtures":
            args.out_dir.mkdir(parents=True, exist_ok=True)
            kb_path = args.kb or write_default_kb(args.out_dir / "default_kb.tsv")
            manifest = gen_fixtures(args.benign, args.phishing, kb_load(kb_path), args.out_dir)
            print(manifest)
            return 0

        kb_path = args.kb
        manifest = args.corpus_manifest
        workdir = None
        if kb_path is None or manifest is None:
            workdir = Path(tempfile.mkdtemp(prefix="bench-fixtures-"))
            if kb_path is None:
                kb_path = write_default_kb(workdir / "default_kb.tsv")
            if manifest is None:
                manifest = gen_fixtures(args.benign, args.phishing, kb_load(kb_path), workdir)
        config = BenchConfig(
            mode=args.mode,
            benign_list=args.benign,
            phishing_list=args.phishing,
            blacklist_seed_fraction=args.seed_fraction,
            simulated_crawl_ms=args.crawl_ms,
            simulated_rbpd_ms=args.rbpd_ms,
            output_path=args.out,
            kb_path=kb_path,
            corpus_manifest=manifest,
            clients=args.clients,
            stw_workers=args.stw_workers,
        )
        report = run(config)
    except (ConfigInvalid, FixtureMissing) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report.to_json(), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
