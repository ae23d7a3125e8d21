"""
Logging setup shared by the library, the CLI and the HTTP surface
"""
import logging
import os
import sys
from typing import Optional, TextIO

# Status prefixes used in log messages
OK = "✅"
WARN = "⚠️ "
FAIL = "❌"
RETRY = "🔄"
STATS = "📊"

_ROOT_NAME = "bgrd"
_handler: Optional[logging.StreamHandler] = None


def configure_logging(level: Optional[str] = None, stream: Optional[TextIO] = None) -> logging.Logger:
    """
    Attach a single stderr handler to the package logger

    Each call points the handler at stream, or the current sys.stderr.

    Args:
        level: Level name; falls back to BGRD_LOG_LEVEL, then INFO
        stream: Destination; defaults to sys.stderr at call time

    Returns:
        The package root logger
    """
    global _handler
    stream = stream if stream is not None else sys.stderr
    root = logging.getLogger(_ROOT_NAME)
    level_name = (level or os.getenv("BGRD_LOG_LEVEL") or "INFO").upper()
    root.setLevel(getattr(logging, level_name, logging.INFO))

    if _handler is None:
        _handler = logging.StreamHandler(stream)
        _handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        root.addHandler(_handler)
        root.propagate = False
    else:
        _handler.setStream(stream)
    return root


def get_logger(name: str) -> logging.Logger:
    """Child logger under the package root, e.g. get_logger("minimax")"""
    if _handler is None:
        configure_logging()
    return logging.getLogger(f"{_ROOT_NAME}.{name}")
