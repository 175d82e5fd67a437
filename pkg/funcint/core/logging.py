# ================================================================================================
# 📝 LOGGING - structlog configurado una sola vez
# ================================================================================================
# Structured key-value logs to stderr; stdout stays reserved for CLI summaries.

import logging
import sys

import structlog

from .config import Settings, get_settings

_configured = False


def configure_logging(settings: Settings | None = None, force: bool = False) -> None:
    """
    Configure stdlib logging and structlog from ``Settings``.

    Idempotent unless ``force`` is set (the CLI forces it after reading
    overrides).
    """
    global _configured
    if _configured and not force:
        return

    settings = settings or get_settings()
    level = getattr(logging, settings.LOG_LEVEL)

    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(message)s",
        force=True,
    )

    renderer = (
        structlog.processors.JSONRenderer()
        if settings.LOG_FORMAT == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )
    _configured = True
