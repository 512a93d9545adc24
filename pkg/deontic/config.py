"""Runtime settings from the environment (and an optional .env file)."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from deontic.logging_config import LOG_FORMATS

load_dotenv(Path(__file__).resolve().parent.parent / ".env")

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    raw = (os.getenv(name) or "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("ignoring non-integer %s=%r, using %d", name, raw, default)
        return default


def _choice_env(name: str, choices: tuple[str, ...], default: str) -> str:
    raw = (os.getenv(name) or "").strip().lower()
    if not raw:
        return default
    if raw not in choices:
        logger.warning("ignoring %s=%r (expected one of %s), using %s", name, raw, ", ".join(choices), default)
        return default
    return raw


@dataclass(frozen=True)
class Settings:
    log_level: str = "INFO"
    log_format: str = "json"
    seed: int = 0
    threads: int = 1
    samples: int = 100_000
    closure_max_worlds: int = 12
    sentry_dsn: str = ""
    environment: str = "development"
    run_id: str = ""

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            log_level=(os.getenv("CTD_LOG_LEVEL") or "INFO").strip().upper(),
            log_format=_choice_env("CTD_LOG_FORMAT", LOG_FORMATS, "json"),
            seed=_int_env("CTD_SEED", 0),
            threads=max(1, _int_env("CTD_THREADS", 1)),
            samples=max(1, _int_env("CTD_SAMPLES", 100_000)),
            closure_max_worlds=_int_env("CTD_CLOSURE_MAX_WORLDS", 12),
            sentry_dsn=(os.getenv("SENTRY_DSN") or "").strip(),
            environment=(os.getenv("CTD_ENVIRONMENT") or "development").strip(),
            run_id=(os.getenv("CTD_RUN_ID") or "").strip(),
        )

    @property
    def level(self) -> int:
        level = logging.getLevelName(self.log_level)
        return level if isinstance(level, int) else logging.INFO
