"""Logging setup and colored terminal messages."""

import logging
import sys

_configured = False


def get_logger(name: str) -> logging.Logger:
    """Returns a module logger, configuring the root handler once.

    Args:
        name (str): Logger name, usually `__name__`.

    Returns:
        logging.Logger: The logger.
    """
    global _configured
    if not _configured:
        logging.basicConfig(
            level=logging.WARNING, format='%(levelname)s: %(message)s'
        )
        _configured = True
    return logging.getLogger(name)


def set_verbosity(verbose: bool) -> None:
    """Switches the motionkit loggers between WARNING and INFO.

    Args:
        verbose (bool): If True, progress messages are shown.
    """
    get_logger('core').setLevel(logging.INFO if verbose else logging.WARNING)


def print_green(text: str) -> None:
    """Success line."""
    print(f'\033[32m{text}\033[0m')


def print_yellow(text: str) -> None:
    """Warning line."""
    print(f'\033[33m{text}\033[0m')


def print_red(text: str) -> None:
    """Error line, written to stderr."""
    print(f'\033[31m{text}\033[0m', file=sys.stderr)
