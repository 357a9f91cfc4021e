"""Logging helpers for fastersim.

Provides debug(), info(), warn(), error() functions for consistent logging.
Debug output is controlled by the FASTERSIM_DEBUG environment variable (or
``RuntimeSettings.debug``). Engine modules log through
``logging.getLogger(__name__)``, which propagates to the ``fastersim`` logger
configured here.
"""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from fastersim.utils.settings import RuntimeSettings

LOG_FORMAT = "%(message)s"

_logger: Optional[logging.Logger] = None


def setup_logger(debug_on: Optional[bool] = None) -> logging.Logger:
    """Install the ``fastersim`` Rich handler once and return the logger.

    The handler writes to whatever ``sys.stderr`` is at emit time.
    """
    global _logger
    settings = RuntimeSettings()
    if debug_on is None:
        debug_on = settings.debug
    logger = logging.getLogger("fastersim")
    if not logger.handlers:
        console = (
            Console(stderr=True, color_system=None)
            if settings.no_rich
            else Console(stderr=True)
        )
        handler = RichHandler(console=console, show_path=False)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if debug_on else logging.INFO)
    _logger = logger
    return logger


def _get() -> logging.Logger:
    return _logger if _logger is not None else setup_logger()


def debug(msg: str) -> None:
    """Log a debug message (shown only with FASTERSIM_DEBUG=1)."""
    _get().debug(msg)


def info(msg: str) -> None:
    """Log an info message."""
    _get().info(msg)


def warn(msg: str) -> None:
    """Log a warning message."""
    _get().warning(msg)


def error(msg: str) -> None:
    """Log an error message."""
    _get().error(msg)
