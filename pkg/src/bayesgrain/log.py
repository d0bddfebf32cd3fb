"""
Logging for the bayesgrain command line.

Diagnostics go to stderr so that reports written to stdout stay parseable.
"""

import logging
import logging.config
import time
from collections.abc import Generator
from contextlib import contextmanager
from typing import Any

LOGGER = logging.getLogger(__name__)

FORMATS = {
    "brief": "%(asctime)s [%(levelname)s] %(message)s",
    "detailed": "%(asctime)s [%(levelname)s] %(name)s.%(funcName)s: %(message)s",
}


def logging_config(verbose: bool) -> dict[str, Any]:
    """
    dictConfig schema used by ``setup_logging``.

    Verbose runs log the module and function of each record, which tells
    grain, partition and search messages apart. Python warnings, such as
    numpy overflow in far-tail density ratios, are routed into the log.
    """
    formatter = "detailed" if verbose else "brief"
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {name: {"format": fmt} for name, fmt in FORMATS.items()},
        "handlers": {
            "stderr": {
                "class": "logging.StreamHandler",
                "formatter": formatter,
                "stream": "ext://sys.stderr",
            }
        },
        "loggers": {
            "bayesgrain": {"level": logging.DEBUG if verbose else logging.INFO},
            "py.warnings": {"level": logging.DEBUG if verbose else logging.ERROR},
        },
        "root": {"level": "WARNING", "handlers": ["stderr"]},
    }


def setup_logging(verbose: bool) -> None:
    """
    Configure logging for one command invocation.

    Args:
        verbose: Emit the DEBUG records of the solvers (pivots, per-cell
            certificates, sampled counts).
    """
    logging.config.dictConfig(config=logging_config(verbose))
    logging.captureWarnings(True)
    LOGGER.debug("Verbose logging enabled")


@contextmanager
def log_elapsed(name: str) -> Generator[None, None, None]:
    """
    Log wall time of the with block at DEBUG, noting whether it raised.

    Example:
        >>> with log_elapsed("partition"):
        ...     partition_prover(prior, family, 1.0)
        "partition completed in 0.42s"
    """
    start_time = time.perf_counter()
    outcome = "failed"
    try:
        yield
        outcome = "completed"
    finally:
        elapsed = time.perf_counter() - start_time
        LOGGER.debug("%s %s in %.2fs", name, outcome, elapsed)
