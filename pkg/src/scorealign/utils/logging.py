"""Standardized logging for Scorealign.

Provides three output modes:
- Human mode: [LEVEL] message (colored if TTY)
- Verbose mode: [LEVEL][HH:MM:SS] message
- CI/JSON mode: {"level":"...","ts":"...","msg":"...", ...fields}

Log lines go to stderr so that stdout stays reserved for command results
(alignment and report JSON).
"""

import json
import logging
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from datetime import datetime, timezone
from enum import Enum
from typing import Any, TextIO

ROOT_LOGGER = "scorealign"


class LogMode(Enum):
    """Logging output mode."""

    HUMAN = "human"
    VERBOSE = "verbose"
    JSON = "json"


class Colors:
    """ANSI color codes for terminal output."""

    RESET = "\033[0m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    RED = "\033[31m"
    GRAY = "\033[90m"


LEVEL_COLORS = {
    logging.DEBUG: Colors.GRAY,
    logging.INFO: Colors.GREEN,
    logging.WARNING: Colors.YELLOW,
    logging.ERROR: Colors.RED,
    logging.CRITICAL: Colors.RED,
}


def _is_tty(stream: TextIO | None = None) -> bool:
    """Check if the stream is a TTY (supports colors)."""
    if stream is None:
        stream = sys.stderr
    return hasattr(stream, "isatty") and stream.isatty()


def _format_fields(record: logging.LogRecord) -> str:
    fields = getattr(record, "extra_data", None)
    if not fields:
        return ""
    return " " + " ".join(f"{key}={value}" for key, value in fields.items())


class HumanFormatter(logging.Formatter):
    """Formatter for human-readable output.

    Format: [LEVEL] message key=value ...
    """

    def __init__(self, use_colors: bool = True) -> None:
        super().__init__()
        self.use_colors = use_colors

    def format(self, record: logging.LogRecord) -> str:
        """Format a log record."""
        text = f"{record.getMessage()}{_format_fields(record)}"
        if self.use_colors:
            color = LEVEL_COLORS.get(record.levelno, Colors.RESET)
            return f"{color}[{record.levelname}]{Colors.RESET} {text}"
        return f"[{record.levelname}] {text}"


class VerboseFormatter(logging.Formatter):
    """Formatter for verbose output with timestamps.

    Format: [LEVEL][HH:MM:SS] message key=value ...
    """

    def __init__(self, use_colors: bool = True) -> None:
        super().__init__()
        self.use_colors = use_colors

    def format(self, record: logging.LogRecord) -> str:
        """Format a log record with timestamp."""
        timestamp = datetime.fromtimestamp(record.created).strftime("%H:%M:%S")
        text = f"{record.getMessage()}{_format_fields(record)}"
        if self.use_colors:
            color = LEVEL_COLORS.get(record.levelno, Colors.RESET)
            return f"{color}[{record.levelname}]{Colors.RESET}[{timestamp}] {text}"
        return f"[{record.levelname}][{timestamp}] {text}"


class JSONFormatter(logging.Formatter):
    """Formatter for JSON lines output (machine-readable).

    Format: {"level":"INFO","ts":"2026-01-31T19:45:23+00:00","msg":"...","stage":"dtw"}
    """

    def format(self, record: logging.LogRecord) -> str:
        """Format a log record as JSON."""
        log_entry: dict[str, Any] = {
            "level": record.levelname,
            "ts": datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            "logger": record.name,
            "msg": record.getMessage(),
        }
        if hasattr(record, "extra_data"):
            log_entry.update(record.extra_data)
        return json.dumps(log_entry, default=str)


class ScoreAlignLogger(logging.Logger):
    """Logger with structured-field support."""

    def structured(self, level: int, msg: str, **fields: Any) -> None:
        """Log a message with additional structured fields.

        Args:
            level: Log level
            msg: Log message
            **fields: Key/value data (JSON keys in CI mode, key=value otherwise)
        """
        if not self.isEnabledFor(level):
            return
        record = self.makeRecord(self.name, level, "(structured)", 0, msg, (), None)
        if fields:
            record.extra_data = fields  # type: ignore[attr-defined]
        self.handle(record)


logging.setLoggerClass(ScoreAlignLogger)


def get_logger(name: str = ROOT_LOGGER) -> ScoreAlignLogger:
    """Get a Scorealign logger instance.

    Args:
        name: Logger name (module loggers should pass __name__)

    Returns:
        ScoreAlignLogger instance
    """
    return logging.getLogger(name)  # type: ignore[return-value]


@contextmanager
def log_stage(logger: logging.Logger, stage: str, **fields: Any) -> Iterator[dict[str, Any]]:
    """Time a pipeline stage and log its completion with elapsed seconds.

    The yielded dict may be filled with extra fields by the caller; they are
    attached to the completion record.
    """
    extra: dict[str, Any] = dict(fields)
    start = time.perf_counter()
    logger.debug("Stage %s started", stage)
    yield extra
    extra["elapsed_s"] = round(time.perf_counter() - start, 4)
    if isinstance(logger, ScoreAlignLogger):
        logger.structured(logging.INFO, f"Stage {stage} done", stage=stage, **extra)
    else:
        logger.info("Stage %s done (%.4fs)", stage, extra["elapsed_s"])


def setup_logging(
    mode: LogMode = LogMode.HUMAN,
    level: int = logging.INFO,
    stream: TextIO | None = None,
) -> None:
    """Configure logging with the specified mode.

    Args:
        mode: Output mode (human, verbose, json)
        level: Minimum log level
        stream: Output stream (default: stderr)
    """
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level)
    logger.handlers.clear()

    target = stream or sys.stderr
    use_colors = _is_tty(target)

    if mode == LogMode.JSON:
        formatter: logging.Formatter = JSONFormatter()
    elif mode == LogMode.VERBOSE:
        formatter = VerboseFormatter(use_colors=use_colors)
    else:
        formatter = HumanFormatter(use_colors=use_colors)

    handler = logging.StreamHandler(target)
    handler.setFormatter(formatter)
    logger.addHandler(handler)


def configure_from_cli(
    verbose: bool = False,
    quiet: bool = False,
    ci: bool = False,
) -> None:
    """Configure logging based on CLI flags.

    Args:
        verbose: Enable verbose mode with timestamps and DEBUG level
        quiet: Suppress info messages (warnings and errors only)
        ci: Enable JSON output for CI/CD
    """
    if ci:
        mode = LogMode.JSON
    elif verbose:
        mode = LogMode.VERBOSE
    else:
        mode = LogMode.HUMAN

    if quiet:
        level = logging.WARNING
    elif verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO

    setup_logging(mode=mode, level=level)
