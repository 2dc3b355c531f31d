import logging
import sys

import colorlog

from ..config.settings import Config

PACKAGE_LOGGER = 'grouplen'

LOG_COLORS = {
    'DEBUG':    'cyan',
    'INFO':     'green',
    'WARNING':  'yellow',
    'ERROR':    'red',
    'CRITICAL': 'red,bg_white',
}


def _package_logger() -> logging.Logger:
    """The package logger owns the only handler; module loggers propagate to it."""
    logger = logging.getLogger(PACKAGE_LOGGER)
    if not logger.handlers:
        # stdout carries the JSON reports, so logs go to stderr
        handler = colorlog.StreamHandler(sys.stderr)
        handler.setFormatter(colorlog.ColoredFormatter(
            fmt='%(log_color)s%(asctime)s [%(levelname)s] %(purple)s[%(name)s]%(reset)s %(message)s',
            datefmt='%H:%M:%S',
            reset=True,
            log_colors=LOG_COLORS,
            style='%'
        ))
        logger.addHandler(handler)
        logger.setLevel(Config.LOG_LEVEL)
        logger.propagate = False
    return logger


def setup_logger(name: str) -> logging.Logger:
    """
    Logger for a grouplen module, nested under the package logger.

    Names from outside the package are prefixed so every record ends up on
    the same colored handler.
    """
    package = _package_logger()
    if name == PACKAGE_LOGGER:
        return package
    if not name.startswith(PACKAGE_LOGGER + '.'):
        name = f"{PACKAGE_LOGGER}.{name}"
    return logging.getLogger(name)


def set_level(level: int) -> None:
    """Re-level the package logger; module loggers inherit it (used by --verbose)."""
    _package_logger().setLevel(level)
