"""
structlog configuration shared by the library and the CLI.
"""

import logging
import sys

import structlog

from .config import get_settings

_LEVELS = {0: logging.WARNING, 1: logging.INFO}


def configure_logging(verbosity: int = 0) -> None:
    """
    Route structlog events to stderr.

    Args:
        verbosity: 0 = warnings only, 1 = info, 2+ = debug
    """
    level = _LEVELS.get(verbosity, logging.DEBUG)
    settings = get_settings()
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.dev.ConsoleRenderer(colors=settings.colors_enabled),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
