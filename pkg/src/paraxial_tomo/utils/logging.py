"""Structured logging for toolkit runs.

Events go to stderr; stdout is reserved for written paths, metrics and
PASS/FAIL verdicts.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Any, Optional

import structlog

CONSOLE_TIME_FORMAT = "%Y-%m-%d %H:%M:%S"


def _processors(json_output: bool) -> list[Any]:
    shared: list[Any] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
    ]
    if json_output:
        return shared + [
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.dict_tracebacks,
            structlog.processors.JSONRenderer(),
        ]
    return shared + [
        structlog.processors.TimeStamper(fmt=CONSOLE_TIME_FORMAT),
        structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty()),
    ]


def setup_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    json_output: bool = False,
) -> structlog.BoundLogger:
    """Configure structured logging for one command.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR).
        log_file: Optional file that receives the standard-library records too.
        json_output: Render events as JSON lines.

    Returns:
        Configured structlog logger.
    """
    log_level = getattr(logging, level.upper(), logging.INFO)

    # Standard-library handlers (numpy/scipy/PIL warnings end up here)
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path, encoding="utf-8"))
    for handler in handlers:
        handler.setLevel(log_level)
    logging.basicConfig(format="%(message)s", level=log_level, handlers=handlers, force=True)

    # Drop context left over from a previous command in the same process
    structlog.contextvars.clear_contextvars()

    structlog.configure(
        processors=_processors(json_output),
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        # module-level proxies must follow later reconfiguration
        cache_logger_on_first_use=False,
    )

    return structlog.get_logger()


def bind_run_context(**values: Any) -> None:
    """Attach ``values`` to every event logged for the rest of the command."""
    structlog.contextvars.bind_contextvars(**values)


def get_logger(name: Optional[str] = None) -> structlog.BoundLogger:
    """Get a logger instance.

    Args:
        name: Component name bound to every event.

    Returns:
        Lazy structlog proxy; it resolves against whatever configuration
        ``setup_logging`` installed last.
    """
    if name:
        return structlog.get_logger(component=name)
    return structlog.get_logger()
