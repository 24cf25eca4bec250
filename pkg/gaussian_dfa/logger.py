"""Logging configuration for gaussian-dfa."""
import logging
from functools import lru_cache
from logging import Logger
from types import MethodType
from typing import Any, cast

_FORMAT = "%(levelname)s %(asctime)s [%(filename)s:%(lineno)d] %(message)s"
_DATE_FORMAT = "%m-%d %H:%M:%S"

DEFAULT_LOGGING_CONFIG: dict[str, Any] = {
    "formatters": {
        "gaussian_dfa": {
            "class": "logging.Formatter",
            "datefmt": _DATE_FORMAT,
            "format": _FORMAT,
        },
    },
    "handlers": {
        "gaussian_dfa": {
            "class": "logging.StreamHandler",
            "formatter": "gaussian_dfa",
            "level": "INFO",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "gaussian_dfa": {
            "handlers": ["gaussian_dfa"],
            "level": "INFO",
            "propagate": False,
        },
    },
    "version": 1,
    "disable_existing_loggers": False,
}


@lru_cache
def _print_info_once(logger: Logger, msg: str, *args) -> None:
    # stacklevel 3 points at the caller of info_once
    logger.info(msg, *args, stacklevel=3)


@lru_cache
def _print_warning_once(logger: Logger, msg: str, *args) -> None:
    logger.warning(msg, *args, stacklevel=3)


class _GaussianDfaLogger(Logger):
    """
    Type hint for loggers returned by `init_logger`. The once-variants only
    emit a given (message, args) combination a single time per process.
    """

    def info_once(self, msg: str, *args) -> None:
        _print_info_once(self, msg, *args)

    def warning_once(self, msg: str, *args) -> None:
        _print_warning_once(self, msg, *args)


def init_logger(name: str) -> _GaussianDfaLogger:
    """The main purpose of this function is to ensure that loggers are
    retrieved in such a way that we can be sure the root gaussian_dfa logger
    has already been configured."""
    logger = logging.getLogger(name)

    methods_to_patch = {
        "info_once": _print_info_once,
        "warning_once": _print_warning_once,
    }
    for method_name, method in methods_to_patch.items():
        setattr(logger, method_name, MethodType(method, logger))

    return cast(_GaussianDfaLogger, logger)
