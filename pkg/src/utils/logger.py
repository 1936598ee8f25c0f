#!/usr/bin/env python3
"""
Logging for the router, the compiler and the CLI.

Every module asks for its logger through ``get_logger(__name__)``. The root
logger gets one stdout handler, and optionally a DEBUG file handler, the
first time anything asks. Console output is either level-based text (INFO
is printed bare so tables and statistics read cleanly) or one JSON object
per record.

Environment:
    LOG_LEVEL            console level, INFO by default
    LOG_FILE             path of an optional DEBUG log file
    LOG_FORMAT           "default" or "json"
    LOG_VERBOSE_CONSOLE  "true" adds timestamp and logger name to warnings
    THIRD_PARTY_LOG_LEVEL  level for networkx, hypothesis and the executor
"""

import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_LOG_FORMAT_SIMPLE = "%(levelname)s - %(message)s"
DEFAULT_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# record attributes passed through ``extra=`` that end up in JSON entries
JSON_EXTRA_FIELDS = ("phase", "layer", "r")

NOISY_LIBRARIES = ("networkx", "hypothesis", "concurrent.futures")

_logging_initialized = False


def _env_flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).strip().lower() == "true"


class JSONFormatter(logging.Formatter):
    """One JSON object per record: timestamp, level, logger, message and any routing extras."""

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        entry.update({key: getattr(record, key) for key in JSON_EXTRA_FIELDS if hasattr(record, key)})
        return json.dumps(entry)


class LevelBasedFormatter(logging.Formatter):
    """Bare INFO messages, prefixed warnings and errors.

    Args:
        full_format: Format used for WARNING and above when ``verbose`` is set.
        simple_format: Format used for WARNING and above otherwise.
        datefmt: Date format passed to both formats.
        verbose: Select ``full_format`` for non-INFO records.
    """

    def __init__(self, full_format: str, simple_format: str,
                 datefmt: Optional[str] = None, verbose: bool = False) -> None:
        super().__init__(simple_format, datefmt)
        self.verbose = verbose
        self._verbose_formatter = logging.Formatter(full_format, datefmt) if verbose else None

    def format(self, record: logging.LogRecord) -> str:
        if record.levelno == logging.INFO:
            return record.getMessage()
        if self._verbose_formatter is None:
            return super().format(record)
        return self._verbose_formatter.format(record)


def suppress_third_party_loggers() -> None:
    """Raise library loggers to THIRD_PARTY_LOG_LEVEL (ERROR unless set)."""
    level = getattr(logging, os.getenv("THIRD_PARTY_LOG_LEVEL", "ERROR").upper(), logging.ERROR)
    for name in NOISY_LIBRARIES:
        logging.getLogger(name).setLevel(level)


def _console_handler(level: int, as_json: bool, verbose: bool) -> logging.Handler:
    handler = logging.StreamHandler(sys.stdout)
    handler.setLevel(level)
    if as_json:
        handler.setFormatter(JSONFormatter())
    else:
        handler.setFormatter(LevelBasedFormatter(
            DEFAULT_LOG_FORMAT, DEFAULT_LOG_FORMAT_SIMPLE, datefmt=DEFAULT_DATE_FORMAT, verbose=verbose,
        ))
    return handler


def _file_handler(path: str) -> logging.Handler:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(path, encoding="utf-8")
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(DEFAULT_LOG_FORMAT, datefmt=DEFAULT_DATE_FORMAT))
    return handler


def setup_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    log_format: Optional[str] = None,
    json_format: bool = False,
    simple_format: bool = False
) -> None:
    """
    Install the root handlers once; later calls are no-ops until ``reset_logging``.

    Args:
        log_level: Console level name. Falls back to LOG_LEVEL, then INFO.
        log_file: DEBUG log file path. Falls back to LOG_FILE.
        log_format: "default" or "json". Falls back to LOG_FORMAT.
        json_format: Force JSON console output.
        simple_format: Ignore LOG_VERBOSE_CONSOLE.
    """
    global _logging_initialized
    if _logging_initialized:
        return

    level_name = (log_level or os.getenv("LOG_LEVEL", DEFAULT_LOG_LEVEL)).upper()
    level = getattr(logging, level_name, logging.INFO)
    as_json = json_format or (log_format or os.getenv("LOG_FORMAT", "default")).lower() == "json"
    verbose = _env_flag("LOG_VERBOSE_CONSOLE") and not simple_format

    root = logging.getLogger()
    root.setLevel(level)
    root.handlers.clear()
    root.addHandler(_console_handler(level, as_json, verbose))
    suppress_third_party_loggers()

    file_path = log_file or os.getenv("LOG_FILE")
    if file_path:
        try:
            root.addHandler(_file_handler(file_path))
        except OSError as e:
            root.warning("Failed to set up file logging: %s", e)

    _logging_initialized = True


def reset_logging() -> None:
    """Drop the root handlers so the next ``setup_logging`` starts over."""
    global _logging_initialized
    logging.getLogger().handlers.clear()
    _logging_initialized = False


def get_logger(name: str) -> logging.Logger:
    """
    Return the logger for ``name``, configuring logging first if needed.

    Args:
        name: Usually the calling module's ``__name__``.

    Returns:
        logging.Logger: The named logger.
    """
    if not _logging_initialized:
        setup_logging()
    return logging.getLogger(name)


if _env_flag("BUTTERFLY_AUTO_SETUP_LOGGING", "true"):
    setup_logging()
