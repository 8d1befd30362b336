"""
Process settings for qee-witness.
Loads and validates QEE_WITNESS_* environment variables using Pydantic Settings.
"""

import os
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from the environment (and an optional .env file)."""

    model_config = SettingsConfigDict(
        env_prefix="QEE_WITNESS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Parallelism
    threads: int = Field(default=0, ge=0, description="Worker cap for sweeps (0 = auto)")

    # Logging
    log_level: str = Field(default="WARNING", description="Logging level")
    log_json: bool = Field(default=False, description="Render log events as JSON lines")

    # Output
    csv_precision: int = Field(
        default=12,
        ge=6,
        le=17,
        description="Significant digits written to CSV output",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level is one of the standard levels."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v_upper = v.upper()
        if v_upper not in valid_levels:
            raise ValueError(f"log_level must be one of {valid_levels}")
        return v_upper

    def worker_count(self, hint: Optional[int] = None) -> int:
        """
        Resolve the number of sweep workers.

        The per-sweep hint is capped by the QEE_WITNESS_THREADS setting;
        zero on either side means "no preference".
        """
        auto = os.cpu_count() or 1
        cap = self.threads or auto
        wanted = hint or cap
        return max(1, min(wanted, cap))


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get the global settings instance.
    Creates a new instance if one doesn't exist.
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reload_settings() -> Settings:
    """
    Force reload settings from environment.
    Useful for testing.
    """
    global _settings
    _settings = Settings()
    return _settings
