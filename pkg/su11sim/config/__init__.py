import os
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Base directory is the repository root (one level above su11sim/)
BASE_DIR = Path(__file__).parent.parent.parent


class Settings(BaseSettings):
    """Process-wide settings read from SU11_* environment variables or .env."""

    model_config = SettingsConfigDict(
        env_prefix="SU11_",
        env_file=f"{BASE_DIR}/.env",
        extra="ignore",
    )

    # Worker pool
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)

    # Logging
    log_level: str = "INFO"
    log_format: str = "text"  # "text" or "json"
    log_dir: Optional[str] = None
    log_backup_count: int = 5

    # Outputs
    output_dir: str = "results"
    default_config: str = "config.json"


settings = Settings()

from su11sim.config.run_config import (  # noqa: E402
    RunConfig,
    apply_overrides,
    config_hash,
    load_run_config,
)

__all__ = [
    "BASE_DIR",
    "Settings",
    "settings",
    "RunConfig",
    "apply_overrides",
    "config_hash",
    "load_run_config",
]
