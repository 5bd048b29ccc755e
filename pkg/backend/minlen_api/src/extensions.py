# src/extensions.py
import logging
import sys

from pythonjsonlogger.json import JsonFormatter

# package root, so every module logger (logging.getLogger(__name__)) inherits it
LOGGER_NAME = __name__.split(".")[0]

_handler = None


def configure_logging(level="WARNING", json_format=True):
    """Attach a single stderr handler to the package logger hierarchy.

    Calling it again only swaps level and formatter, so the app factory and the
    CLI can both call it.
    """
    global _handler

    logger = logging.getLogger(LOGGER_NAME)
    if _handler is None:
        _handler = logging.StreamHandler(sys.stderr)
        logger.addHandler(_handler)
        logger.propagate = False
    else:
        # follow stream swaps (CliRunner, redirected stderr)
        _handler.setStream(sys.stderr)

    if json_format:
        _handler.setFormatter(JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s"))
    else:
        _handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))

    logger.setLevel(level.upper() if isinstance(level, str) else level)
    return logger
