"""Logging configuration for the simulator."""

import json
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

SWEEP_LOGGER = "su11sim.sweep"


class JSONFormatter(logging.Formatter):
    """Formatter that outputs JSON structured logs."""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "thread": record.threadName,
            "function": record.funcName,
            "line": record.lineno,
        }

        if hasattr(record, "extra"):
            log_data.update(record.extra)

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


def setup_logging(
    log_level: str = "INFO",
    log_format: str = "text",
    log_dir: Optional[str] = None,
    backup_count: int = 5,
    enable_console: bool = True,
) -> None:
    """Set up logging for a CLI run.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_format: Output format ("text" or "json")
        log_dir: Directory for log files; ``None`` disables file logging
        backup_count: Number of rotated files to keep
        enable_console: Whether to also log to stderr
    """
    if log_format.lower() == "json":
        formatter = JSONFormatter()
    else:
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )

    level = getattr(logging, log_level.upper(), logging.INFO)
    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers = []
    sweep_logger = logging.getLogger(SWEEP_LOGGER)
    sweep_logger.handlers = []

    if log_dir:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)

        main_handler = RotatingFileHandler(
            log_path / "su11sim.log", maxBytes=10 * 1024 * 1024, backupCount=backup_count
        )
        main_handler.setFormatter(formatter)
        main_handler.setLevel(logging.DEBUG)
        root_logger.addHandler(main_handler)

        # Sweep progress and summaries
        sweep_handler = RotatingFileHandler(
            log_path / "sweeps.log", maxBytes=10 * 1024 * 1024, backupCount=backup_count
        )
        sweep_handler.setFormatter(formatter)
        sweep_handler.setLevel(logging.INFO)
        sweep_logger.addHandler(sweep_handler)

    if enable_console:
        # stdout is reserved for reports
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        console_handler.setLevel(level)
        root_logger.addHandler(console_handler)

    logging.getLogger(__name__).debug(f"Logging configured: level={log_level}, format={log_format}")
