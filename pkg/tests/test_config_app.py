from __future__ import annotations

import time

import pytest
from fastapi.testclient import TestClient

from conftest import KB_TEXT, write_corpus
from phishtriage.app import boot
from phishtriage.config import AppConfig, ConfigError, load_config
from phishtriage.model import VerdictStatus, normalize


class TestLoadConfig:
    def test_defaults(self):
        config = load_config(None)
        assert config.ftw_worker_count == 8
        assert config.stw_worker_count == 4
        assert config.queue_capacity == 10_000
        assert config.crawler_timeout_secs == 10.0
        assert config.blacklist_sync_interval_secs == 300.0

    def test_file_values(self, tmp_path):
        path = tmp_path / "app.conf"
        path.write_text(
            "# comment\nqueue.capacity=42\nftw.worker_count=2\n"
            "online_blacklist.mode=mock\n",
            encoding="utf-8",
        )
        config = load_config(path)
        assert config.queue_capacity == 42
        assert config.ftw_worker_count == 2
        assert config.online_blacklist_mode == "mock"

    def test_unknown_key_fails_fast(self, tmp_path):
        path = tmp_path / "app.conf"
        path.write_text("queue.depth=1\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="queue.depth"):
            load_config(path)

    def test_bad_type_names_key(self, tmp_path):
        path = tmp_path / "app.conf"
        path.write_text("queue.capacity=lots\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="queue.capacity"):
            load_config(path)

    def test_env_override(self, tmp_path, monkeypatch):
        path = tmp_path / "app.conf"
        path.write_text("queue.capacity=42\n", encoding="utf-8")
        monkeypatch.setenv("QUEUE_CAPACITY", "7")
        monkeypatch.setenv("STW_WORKER_COUNT", "2")
        config = load_config(path)
        assert config.queue_capacity == 7
        assert config.stw_worker_count == 2

    def test_invalid_count_rejected(self, tmp_path):
        path = tmp_path / "app.conf"
        path.write_text("stw.worker_count=0\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="stw.worker_count"):
            load_config(path)


def build_env(tmp_path, phish_urls=(), blacklist_urls=()):
    kb_path = tmp_path / "kb.tsv"
    kb_path.write_text(KB_TEXT, encoding="utf-8")
    feed = tmp_path / "feed.txt"
    feed.write_text("\n".join(blacklist_urls) + "\n", encoding="utf-8")
    pages = {
        u: "<html><head><title>PayPal - Log in</title></head>"
           "<body><form action=\"https://paypal-bad.xyz/p\"></form></body></html>"
        for u in phish_urls
    }
    manifest = write_corpus(tmp_path, pages) if pages else None
    config = AppConfig(
        rbpd_kb_path=str(kb_path),
        blacklist_feed_path=str(feed),
        cache_journal_path=str(tmp_path / "cache.journal"),
        queue_journal_path=str(tmp_path / "queue.journal"),
        crawler_corpus_manifest=str(manifest) if manifest else "",
        stw_worker_count=2,
        crawler_timeout_secs=1.0,
    )
    return config


class TestBoot:
    def test_health_reports_worker_counts(self, tmp_path):
        app = boot(build_env(tmp_path))
        client = TestClient(app.api)
        body = client.get("/api/v1/health").json()
        assert body["workers"] == {"ftw": 8, "stw": 2}
        assert body["blacklist_version"] == 1
        app.stop()

    def test_missing_kb_fails_with_key(self, tmp_path):
        config = build_env(tmp_path)
        config.rbpd_kb_path = str(tmp_path / "nope.tsv")
        with pytest.raises(ConfigError, match="rbpd.kb_path"):
            boot(config)

    def test_missing_feed_fails_with_key(self, tmp_path):
        config = build_env(tmp_path)
        config.blacklist_feed_path = str(tmp_path / "nope.txt")
        with pytest.raises(ConfigError, match="blacklist.feed_path"):
            boot(config)

    def test_end_to_end_detect_drain(self, tmp_path):
        url = "https://paypal-phish.example-bad.xyz/login"
        app = boot(build_env(tmp_path, phish_urls=[url]))
        app.start()
        try:
            client = TestClient(app.api)
            first = client.post("/api/v1/detect", json={"urls": [url]}).json()
            assert first[0]["status"] == "pending"
            deadline = time.time() + 5
            while time.time() < deadline:
                again = client.post("/api/v1/detect", json={"urls": [url]}).json()
                if again[0]["status"] != "pending":
                    break
                time.sleep(0.05)
            assert again[0]["status"] == "phishing"
            assert again[0]["source"] == "rbpd"
        finally:
            app.stop()

    def test_restart_durability(self, tmp_path):
        url = "https://paypal-phish.example-bad.xyz/login"
        config = build_env(tmp_path, phish_urls=[url])
        app = boot(config)
        app.start()
        client = TestClient(app.api)
        client.post("/api/v1/detect", json={"urls": [url]})
        assert app.stw_pool.drain(timeout=5)
        app.stop()

        reborn = boot(config)
        verdict = reborn.cache.get(normalize(url))
        assert verdict is not None
        assert verdict.status == VerdictStatus.PHISHING
        reborn.stop()

    def test_shutdown_drains_no_pending_at_rest(self, tmp_path):
        urls = [f"https://paypal-phish{i}.bad.xyz/login" for i in range(6)]
        config = build_env(tmp_path, phish_urls=urls)
        app = boot(config)
        app.start()
        client = TestClient(app.api)
        client.post("/api/v1/detect", json={"urls": urls})
        assert app.stw_pool.drain(timeout=10)
        app.stop()
        for u in urls:
            verdict = app.cache.get(normalize(u))
            assert verdict is not None
            assert verdict.status != VerdictStatus.PENDING
