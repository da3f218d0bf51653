"""
Logging configuration.
"""
import logging
import sys
from typing import Optional, TextIO

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: str = "INFO", stream: Optional[TextIO] = None) -> None:
    """
    Configure root logging once for CLI and script use.

    Args:
        level: Logging level name (DEBUG, INFO, WARNING, ...)
        stream: Output stream, stdout by default
    """
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(stream or sys.stdout)],
        force=True,
    )
    # numba is chatty at DEBUG
    logging.getLogger("numba").setLevel(logging.WARNING)
