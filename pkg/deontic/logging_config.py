"""Run-scoped structured logging for checker commands.

Every record carries the id of the run that produced it. Records go to
stderr as JSON lines (or ``key=value`` text for interactive use); stdout
belongs to command reports.
"""

import json
import logging
import sys
import uuid
from contextvars import ContextVar, Token
from datetime import datetime, timezone
from typing import Any, Iterable, Optional

run_id_var: ContextVar[str] = ContextVar("run_id", default="-")

# Search and command attributes accepted through logger.info(..., extra={...})
SEARCH_FIELDS = (
    "command",
    "kind",
    "construction",
    "condition",
    "n",
    "candidates",
    "violations",
    "seed",
    "elapsed_ms",
)

LOG_FORMATS = ("json", "text")


def new_run_id() -> str:
    return uuid.uuid4().hex[:12]


def bind_run(run_id: Optional[str] = None) -> Token:
    """Tag subsequent records with `run_id` (a fresh one if not given)."""
    return run_id_var.set(run_id or new_run_id())


def _search_fields(record: logging.LogRecord, fields: Iterable[str]) -> dict[str, Any]:
    found = {}
    for key in fields:
        value = getattr(record, key, None)
        if value is not None:
            found[key] = value
    return found


class JsonFormatter(logging.Formatter):
    """One JSON object per record: time, level, logger, message, run id, search fields."""

    def __init__(self, fields: Iterable[str] = SEARCH_FIELDS) -> None:
        super().__init__()
        self.fields = tuple(fields)

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "run_id": getattr(record, "run_id", "-"),
            **_search_fields(record, self.fields),
        }
        if record.exc_info and record.exc_info[0] is not None:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


class KeyValueFormatter(logging.Formatter):
    """``LEVEL logger [run] message key=value ...`` for reading logs in a terminal."""

    def __init__(self, fields: Iterable[str] = SEARCH_FIELDS) -> None:
        super().__init__()
        self.fields = tuple(fields)

    def format(self, record: logging.LogRecord) -> str:
        pairs = " ".join(f"{k}={v}" for k, v in _search_fields(record, self.fields).items())
        line = f"{record.levelname:<7} {record.name} [{getattr(record, 'run_id', '-')}] {record.getMessage()}"
        if pairs:
            line = f"{line} {pairs}"
        if record.exc_info and record.exc_info[0] is not None:
            line = f"{line}\n{self.formatException(record.exc_info)}"
        return line


class RunIdFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = run_id_var.get()
        return True


def setup_logging(level: int = logging.INFO, fmt: str = "json") -> None:
    """Route every logger through one stderr handler in the chosen format."""
    if fmt not in LOG_FORMATS:
        raise ValueError(f"unknown log format {fmt!r}; expected one of {', '.join(LOG_FORMATS)}")
    root = logging.getLogger()
    root.setLevel(level)

    # Remove any existing handlers (e.g. from basicConfig or an earlier run)
    root.handlers.clear()

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonFormatter() if fmt == "json" else KeyValueFormatter())
    handler.addFilter(RunIdFilter())
    root.addHandler(handler)
