from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from phishtriage.bench import (
    BenchConfig,
    ConfigInvalid,
    FixtureMissing,
    gen_fixtures,
    main,
    percentile,
    run,
    write_default_kb,
)
from phishtriage.model import VerdictStatus, WebpageContent, normalize, utcnow
from phishtriage.rbpd import classify, kb_load


def write_lists(tmp_path, n_benign=10, n_phishing=10):
    benign = tmp_path / "benign.txt"
    phishing = tmp_path / "phishing.txt"
    benign.write_text(
        "\n".join(f"https://benign{i}.safe-site{i}.com/home" for i in range(n_benign)) + "\n",
        encoding="utf-8",
    )
    phishing.write_text(
        "\n".join(f"https://phish{i}.bad-host{i}.xyz/login" for i in range(n_phishing)) + "\n",
        encoding="utf-8",
    )
    return benign, phishing


@pytest.fixture
def bench_env(tmp_path):
    benign, phishing = write_lists(tmp_path)
    kb_path = write_default_kb(tmp_path / "kb.tsv")
    kb = kb_load(kb_path)
    manifest = gen_fixtures(benign, phishing, kb, tmp_path / "fixtures")
    return benign, phishing, kb_path, kb, manifest


def make_config(bench_env, tmp_path, **overrides):
    benign, phishing, kb_path, _, manifest = bench_env
    defaults = dict(
        mode="fast-slow",
        benign_list=benign,
        phishing_list=phishing,
        blacklist_seed_fraction=0.5,
        simulated_crawl_ms=0,
        simulated_rbpd_ms=0,
        output_path=tmp_path / "out" / "report.json",
        kb_path=kb_path,
        corpus_manifest=manifest,
        clients=4,
        stw_workers=4,
    )
    defaults.update(overrides)
    return BenchConfig(**defaults)


class TestGenFixtures:
    def test_manifest_conservation(self, bench_env):
        _, _, _, _, manifest = bench_env
        lines = [l for l in manifest.read_text().splitlines() if l.strip()]
        assert len(lines) == 20

    def test_round_robin_brand_assignment(self, tmp_path, bench_env):
        benign, phishing, _, kb, manifest = bench_env
        brands = sorted(kb)
        counts = {b: 0 for b in brands}
        base = manifest.parent
        for i, raw in enumerate(phishing.read_text().split()):
            rel = dict(
                l.split("\t")[:2] for l in manifest.read_text().splitlines() if l.strip()
            )[normalize(raw).normalized]
            html = (base / rel).read_text(encoding="utf-8")
            record = normalize(raw)
            content = WebpageContent(url=record, html=html, fetched_at=utcnow(), fetch_ms=0)
            verdict = classify(record, content, kb)
            assert verdict.status == VerdictStatus.PHISHING
            counts[verdict.target_brand] += 1
        # 10 phishing URLs over 4 brands round-robin
        assert sorted(counts.values(), reverse=True) == [3, 3, 2, 2]

    def test_benign_pages_are_brandless(self, bench_env):
        benign, _, _, kb, manifest = bench_env
        base = manifest.parent
        mapping = dict(
            l.split("\t")[:2] for l in manifest.read_text().splitlines() if l.strip()
        )
        for raw in benign.read_text().split():
            record = normalize(raw)
            html = (base / mapping[record.normalized]).read_text(encoding="utf-8")
            content = WebpageContent(url=record, html=html, fetched_at=utcnow(), fetch_ms=0)
            assert classify(record, content, kb).status == VerdictStatus.BENIGN


class TestRun:
    def test_full_seed_all_blacklist(self, bench_env, tmp_path):
        config = make_config(bench_env, tmp_path, blacklist_seed_fraction=1.0)
        report = run(config)
        assert report.mean_ms < 5
        assert report.source_distribution == {"local_blacklist": 1.0}

    def test_sequential_lower_bound(self, bench_env, tmp_path):
        config = make_config(
            bench_env,
            tmp_path,
            mode="sequential",
            blacklist_seed_fraction=0.0,
            simulated_crawl_ms=30,
            simulated_rbpd_ms=10,
        )
        report = run(config)
        assert report.mean_ms >= 40

    def test_seed_fraction_gives_exact_split(self, bench_env, tmp_path):
        config = make_config(bench_env, tmp_path, blacklist_seed_fraction=0.6)
        report = run(config)
        assert report.source_distribution["local_blacklist"] == pytest.approx(0.6)
        assert report.source_distribution["rbpd"] == pytest.approx(0.4)
        assert sum(report.source_distribution.values()) == pytest.approx(1.0)

    def test_fast_slow_beats_sequential(self, bench_env, tmp_path):
        kwargs = dict(
            blacklist_seed_fraction=0.5, simulated_crawl_ms=25, simulated_rbpd_ms=5
        )
        fast = run(make_config(bench_env, tmp_path, mode="fast-slow", **kwargs))
        seq = run(
            make_config(
                bench_env,
                tmp_path,
                mode="sequential",
                output_path=tmp_path / "out" / "seq.json",
                **kwargs,
            )
        )
        assert fast.mean_ms < seq.mean_ms

    def test_percentiles_non_decreasing(self, bench_env, tmp_path):
        report = run(make_config(bench_env, tmp_path))
        assert report.p50_ms <= report.p95_ms <= report.p99_ms

    def test_outputs_written(self, bench_env, tmp_path):
        config = make_config(bench_env, tmp_path)
        report = run(config)
        data = json.loads(config.output_path.read_text())
        assert data["mode"] == "fast-slow"
        assert data["n_requests"] == 20
        with config.output_path.with_suffix(".csv").open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 20
        assert set(rows[0]) == {"url", "mode", "ms", "status", "source"}

    def test_missing_fixture_rejected(self, bench_env, tmp_path):
        benign, phishing, kb_path, kb, _ = bench_env
        partial = gen_fixtures(benign, benign, kb, tmp_path / "partial")
        config = make_config(bench_env, tmp_path, corpus_manifest=partial)
        with pytest.raises(FixtureMissing):
            run(config)

    def test_bad_seed_fraction(self, bench_env, tmp_path):
        with pytest.raises(ConfigInvalid):
            make_config(bench_env, tmp_path, blacklist_seed_fraction=1.5)


class TestCli:
    def test_run_subcommand_generates_own_fixtures(self, tmp_path, capsys):
        benign, phishing = write_lists(tmp_path, 4, 4)
        out = tmp_path / "report.json"
        code = main(
            [
                "run", "--mode", "fast-slow",
                "--benign", str(benign), "--phishing", str(phishing),
                "--seed-fraction", "0.5", "--crawl-ms", "0", "--rbpd-ms", "0",
                "--out", str(out),
            ]
        )
        assert code == 0
        assert json.loads(out.read_text())["n_requests"] == 8

    def test_gen_fixtures_subcommand(self, tmp_path, capsys):
        benign, phishing = write_lists(tmp_path, 3, 3)
        code = main(
            [
                "gen-fixtures",
                "--benign", str(benign), "--phishing", str(phishing),
                "--out-dir", str(tmp_path / "fx"),
            ]
        )
        assert code == 0
        printed = capsys.readouterr().out.strip()
        assert Path(printed).is_file()


def test_percentile_helper():
    values = sorted(float(v) for v in range(1, 101))
    assert percentile(values, 50) == 50.0
    assert percentile(values, 95) == 95.0
    assert percentile(values, 99) == 99.0
    assert percentile([], 99) == 0.0
