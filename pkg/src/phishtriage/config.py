"""Flat key=value configuration with environment-variable overrides.

Config keys use dotted names (`queue.capacity`); the matching override
variable is the uppercased name with dots replaced by underscores
(`QUEUE_CAPACITY`). Validation is fail-fast and names the offending key.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key {key!r}: {message}")
        self.key = key


@dataclass
class AppConfig:
    ftw_worker_count: int = 8
    stw_worker_count: int = 4
    queue_capacity: int = 10_000
    queue_max_attempts: int = 3
    queue_journal_path: str = ""
    blacklist_feed_path: str = ""
    blacklist_sync_interval_secs: float = 300.0
    cache_journal_path: str = ""
    cache_ttl_rbpd_days: float = 7.0
    cache_ttl_error_hours: float = 1.0
    crawler_timeout_secs: float = 10.0
    crawler_max_bytes: int = 2 * 1024 * 1024
    crawler_corpus_manifest: str = ""
    rbpd_kb_path: str = ""
    online_blacklist_mode: str = "none"  # mock|none
    online_blacklist_mock_path: str = ""
    api_bind_addr: str = "127.0.0.1:8080"
    api_review_token: str = ""
    api_static_dir: str = ""


def _dotted(name: str) -> str:
    if name.startswith("online_blacklist_"):
        return "online_blacklist." + name[len("online_blacklist_"):]
    return name.replace("_", ".", 1)


# Dotted form keeps the component name as the first segment:
# ftw.worker_count, queue.capacity, blacklist.feed_path, online_blacklist.mode, ...
_KEY_MAP = {_dotted(f.name): f for f in fields(AppConfig)}
_DEFAULTS = AppConfig()


def _coerce(key: str, raw: str, target_type: type) -> Any:
    try:
        if target_type is int:
            return int(raw)
        if target_type is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(key, f"expected {target_type.__name__}, got {raw!r}") from exc


def load_config(path: str | Path | None = None) -> AppConfig:
    values: dict[str, Any] = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, raw = line.partition("=")
            key = key.strip()
            if not sep or key not in _KEY_MAP:
                raise ConfigError(key or f"line {lineno}", "unknown key")
            f = _KEY_MAP[key]
            values[f.name] = _coerce(key, raw.strip(), type(getattr(_DEFAULTS, f.name)))
    for key, f in _KEY_MAP.items():
        env_name = key.replace(".", "_").upper()
        if env_name in os.environ:
            values[f.name] = _coerce(
                key, os.environ[env_name], type(getattr(_DEFAULTS, f.name))
            )
    config = AppConfig(**values)
    validate(config)
    return config


def validate(config: AppConfig) -> None:
    for key, minimum in (
        ("ftw.worker_count", config.ftw_worker_count),
        ("stw.worker_count", config.stw_worker_count),
        ("queue.capacity", config.queue_capacity),
        ("queue.max_attempts", config.queue_max_attempts),
    ):
        if minimum < 1:
            raise ConfigError(key, "must be >= 1")
    for key, value in (
        ("blacklist.sync_interval_secs", config.blacklist_sync_interval_secs),
        ("cache.ttl_rbpd_days", config.cache_ttl_rbpd_days),
        ("cache.ttl_error_hours", config.cache_ttl_error_hours),
        ("crawler.timeout_secs", config.crawler_timeout_secs),
        ("crawler.max_bytes", float(config.crawler_max_bytes)),
    ):
        if value <= 0:
            raise ConfigError(key, "must be positive")
    if config.online_blacklist_mode not in ("mock", "none"):
        raise ConfigError("online_blacklist.mode", "must be 'mock' or 'none'")
