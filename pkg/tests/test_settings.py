"""
Tests for environment settings and logging setup.
"""

import os

import pytest
import structlog
from pydantic import ValidationError

from qee_witness.config import Settings, get_settings, reload_settings
from qee_witness.logging_config import configure_logging


class TestSettings:
    """QEE_WITNESS_* environment variables."""

    def test_defaults(self, monkeypatch):
        for name in ("QEE_WITNESS_THREADS", "QEE_WITNESS_LOG_LEVEL", "QEE_WITNESS_CSV_PRECISION"):
            monkeypatch.delenv(name, raising=False)
        settings = reload_settings()
        assert settings.threads == 0
        assert settings.log_level == "WARNING"
        assert settings.csv_precision == 12
        assert get_settings() is settings

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("QEE_WITNESS_THREADS", "3")
        monkeypatch.setenv("QEE_WITNESS_LOG_LEVEL", "debug")
        settings = reload_settings()
        assert settings.threads == 3
        assert settings.log_level == "DEBUG"

    @pytest.mark.parametrize("name,value", [
        ("QEE_WITNESS_LOG_LEVEL", "LOUD"),
        ("QEE_WITNESS_THREADS", "-1"),
        ("QEE_WITNESS_CSV_PRECISION", "30"),
    ])
    def test_invalid_environment(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ValidationError):
            reload_settings()


class TestWorkerCount:
    """Sweep worker resolution."""

    def test_threads_cap_hint(self):
        assert Settings(threads=2).worker_count(8) == 2

    def test_hint_below_cap(self):
        assert Settings(threads=8).worker_count(3) == 3

    def test_auto(self):
        assert Settings(threads=0).worker_count(0) == (os.cpu_count() or 1)

    def test_at_least_one(self):
        assert Settings(threads=1).worker_count(None) == 1


class TestLogging:
    """structlog configuration."""

    def test_level_filter(self, capsys):
        configure_logging("ERROR")
        logger = structlog.get_logger("test")
        logger.warning("hidden_event")
        logger.error("shown_event", key="value")
        err = capsys.readouterr().err
        assert "hidden_event" not in err
        assert "shown_event" in err
        assert "key=value" in err

    def test_json_lines(self, capsys):
        configure_logging("INFO", json=True)
        structlog.get_logger("test").info("json_event", dim=64)
        line = capsys.readouterr().err.strip()
        assert '"event": "json_event"' in line
        assert '"dim": 64' in line
