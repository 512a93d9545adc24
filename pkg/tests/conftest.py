"""Shared pytest fixtures: isolated environment, small universes and model files."""

import json

import pytest

from models.worlds import WorldSet
from deontic.fixtures import FIXTURES


# ── Ensure env vars don't leak into tests ────────────────────

@pytest.fixture(autouse=True)
def _isolate_env(monkeypatch):
    """Tests run with default settings and never report to Sentry."""
    for name in (
        "CTD_LOG_LEVEL",
        "CTD_LOG_FORMAT",
        "CTD_SEED",
        "CTD_THREADS",
        "CTD_SAMPLES",
        "CTD_CLOSURE_MAX_WORLDS",
        "CTD_ENVIRONMENT",
        "CTD_RUN_ID",
    ):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("SENTRY_DSN", "")


# ── Universes ────────────────────────────────────────────────

@pytest.fixture()
def w2():
    return WorldSet.of_size(2)


@pytest.fixture()
def w3():
    return WorldSet.of_size(3)


@pytest.fixture()
def w4():
    return WorldSet.of_size(4)


# ── Model files ──────────────────────────────────────────────

@pytest.fixture()
def write_json(tmp_path):
    """Write a dict as a JSON model file and return its path."""

    def _write(data, name="model.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture()
def pd_file(write_json):
    """The bundled Prisoners' Dilemma model as a file on disk."""
    return write_json(FIXTURES["pd"], "pd.json")
