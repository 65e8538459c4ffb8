"""Logging setup shared by the CLI, the scripts and the test-suite."""

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_configured = False


def setup_logging(level: str | int = "WARNING") -> logging.Logger:
    """
    Attach a single stderr handler to the `deployment` logger.

    Safe to call more than once: later calls only change the level.
    stdout is left alone because CLI output must stay machine-parsable.
    """
    global _configured
    logger = logging.getLogger("deployment")
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logger.setLevel(level)

    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False
        _configured = True
    return logger
