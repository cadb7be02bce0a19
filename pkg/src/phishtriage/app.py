"""Process composition: build the stores, workers and API from config.

Boot order follows the dependency graph: stores (with journal replay and
the initial blacklist load) before the queue, queue before workers,
workers before the API. Shutdown reverses it: stop accepting requests,
stop the sync loop, drain the slow workers, flush journals.
"""

from __future__ import annotations

import argparse
import logging
import signal
import sys
from dataclasses import dataclass

from fastapi import FastAPI

from .api import ApiState, create_app, mount_static
from .blacklist import BlacklistStore
from .cache import VerdictCache
from .config import AppConfig, ConfigError, load_config
from .crawler import Fetcher, HttpFetcher, corpus_load
from .ftw import FastTaskWorker
from .rbpd import ReferenceDetector, kb_load
from .stw import (
    MockOnlineBlacklist,
    NullOnlineBlacklist,
    OnlineBlacklistClient,
    SlowTaskWorker,
    StwConfig,
    StwPool,
)
from .taskqueue import TaskQueue

log = logging.getLogger(__name__)


@dataclass
class Application:
    config: AppConfig
    blacklist: BlacklistStore
    cache: VerdictCache
    queue: TaskQueue
    ftw: FastTaskWorker
    stw_pool: StwPool
    api: FastAPI
    api_state: ApiState

    def start(self) -> None:
        self.blacklist.start_sync(self.config.blacklist_sync_interval_secs)
        self.stw_pool.start()

    def stop(self) -> None:
        self.blacklist.stop_sync()
        self.stw_pool.stop()
        self.cache.close()
        self.queue.close()


def boot(config: AppConfig) -> Application:
    if not config.rbpd_kb_path:
        raise ConfigError("rbpd.kb_path", "required")
    try:
        kb = kb_load(config.rbpd_kb_path)
    except OSError as exc:
        raise ConfigError("rbpd.kb_path", str(exc)) from exc

    cache = VerdictCache(
        journal_path=config.cache_journal_path or None,
        ttl_rbpd_days=config.cache_ttl_rbpd_days,
        ttl_error_hours=config.cache_ttl_error_hours,
    )
    blacklist = BlacklistStore(config.blacklist_feed_path or None)
    if config.blacklist_feed_path:
        try:
            blacklist.load_feed()
        except OSError as exc:
            raise ConfigError("blacklist.feed_path", str(exc)) from exc
    queue = TaskQueue(
        capacity=config.queue_capacity,
        max_attempts=config.queue_max_attempts,
        journal_path=config.queue_journal_path or None,
    )

    fetcher: Fetcher
    if config.crawler_corpus_manifest:
        fetcher = corpus_load(config.crawler_corpus_manifest)
    else:
        fetcher = HttpFetcher()

    online: OnlineBlacklistClient
    if config.online_blacklist_mode == "mock" and config.online_blacklist_mock_path:
        online = MockOnlineBlacklist.from_file(config.online_blacklist_mock_path)
    else:
        online = NullOnlineBlacklist()

    ftw = FastTaskWorker(blacklist, cache, queue)
    stw_config = StwConfig(
        worker_count=config.stw_worker_count,
        crawl_timeout_secs=config.crawler_timeout_secs,
        crawl_max_bytes=config.crawler_max_bytes,
    )
    stw = SlowTaskWorker(queue, cache, fetcher, ReferenceDetector(kb), online, stw_config)
    stw_pool = StwPool(stw, queue, stw_config)

    api_state = ApiState(
        blacklist=blacklist,
        cache=cache,
        queue=queue,
        ftw=ftw,
        ftw_worker_count=config.ftw_worker_count,
        stw_worker_count=config.stw_worker_count,
        review_token=config.api_review_token,
    )
    api = create_app(api_state)
    if config.api_static_dir:
        mount_static(api, config.api_static_dir)

    return Application(
        config=config,
        blacklist=blacklist,
        cache=cache,
        queue=queue,
        ftw=ftw,
        stw_pool=stw_pool,
        api=api,
        api_state=api_state,
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="Run the phishing triage service")
    parser.add_argument("--config", help="path to key=value config file")
    parser.add_argument(
        "--check", action="store_true", help="validate config and exit"
    )
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = load_config(args.config)
        if args.check:
            print("config ok")
            return 0
        app = boot(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    import uvicorn

    host, _, port = config.api_bind_addr.partition(":")
    app.start()

    def shutdown(signum, frame):
        app.stop()
        raise SystemExit(0)

    signal.signal(signal.SIGTERM, shutdown)
    try:
        uvicorn.run(app.api, host=host or "127.0.0.1", port=int(port or 8080))
    finally:
        app.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
