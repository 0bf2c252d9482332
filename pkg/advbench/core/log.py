"""Advbench application logging."""

import functools
import logging
import time
from typing import Callable

PACKAGE_LOGGER = "advbench"
LOG_FORMAT = "%(asctime)s::%(levelname)s::%(name)s::%(message)s"
DATE_FORMAT = "%Y-%m-%dT%H:%M:%S"

TRACE_LOG_LEVEL = 5
logging.addLevelName(TRACE_LOG_LEVEL, "TRACE")


def trace(self: logging.Logger, message: str, *args, **kwargs):
    """Log ``message`` at the TRACE level."""
    if self.isEnabledFor(TRACE_LOG_LEVEL):
        self._log(TRACE_LOG_LEVEL, message, args, **kwargs)


logging.Logger.trace = trace

log = logging.getLogger(__name__)


def get_module_logger() -> logging.Logger:
    """
    Package logger with a single stream handler.

    Returns
    -------
    logging.Logger
        The ``advbench`` logger; calling this again replaces the handler
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.propagate = False
    logger.handlers = []

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    logger.addHandler(handler)

    return logger


def level_from_flags(
    warning: bool = True, verbose: bool = False, debug: bool = False, trace: bool = False
) -> int:
    """The most detailed level among the command line flags, ERROR when none is set."""
    if trace:
        return TRACE_LOG_LEVEL
    if debug:
        return logging.DEBUG
    if verbose:
        return logging.INFO
    if warning:
        return logging.WARNING
    return logging.ERROR


def configure_worker_logging(level: int):
    """Process pool initializer; workers do not inherit the parent's handler under spawn."""
    get_module_logger().setLevel(level)


def package_level() -> int:
    return logging.getLogger(PACKAGE_LOGGER).getEffectiveLevel()


def tracing(func: Callable):
    """
    Log entry, exit with elapsed seconds, and exceptions of ``func``.

    Parameters
    ----------
    func : Callable
        Function to log
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        log.trace(f"Entering {func.__name__}(args: {args}, kwargs: {kwargs})...")
        started = time.perf_counter()

        try:
            result = func(*args, **kwargs)
        except Exception as exc:
            log.error(f"Exception raised in {func.__name__}. exception: {exc}")
            raise

        log.trace(f"Exiting {func.__name__} after {time.perf_counter() - started:.3f}s...")

        return result

    return wrapper
