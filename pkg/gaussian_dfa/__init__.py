import json
from logging.config import dictConfig
from typing import Any

import gaussian_dfa.envs as envs
from gaussian_dfa.logger import DEFAULT_LOGGING_CONFIG

try:
    from gaussian_dfa._version import __version__
except ImportError:  # pragma: no cover
    __version__ = "0.0.0"


def _init_logging():
    """Setup logging for the gaussian_dfa package"""
    config = dict[str, Any]()

    if envs.GAUSS_DFA_CONFIGURE_LOGGING:
        config = {
            **DEFAULT_LOGGING_CONFIG,
            "handlers": {
                k: dict(v)
                for k, v in DEFAULT_LOGGING_CONFIG["handlers"].items()
            },
            "loggers": {
                k: dict(v)
                for k, v in DEFAULT_LOGGING_CONFIG["loggers"].items()
            },
        }
        config["loggers"]["gaussian_dfa"]["level"] = (
            envs.GAUSS_DFA_LOGGING_LEVEL)
        config["handlers"]["gaussian_dfa"]["level"] = (
            envs.GAUSS_DFA_LOGGING_LEVEL)

    if envs.GAUSS_DFA_LOGGING_CONFIG_PATH:
        with open(envs.GAUSS_DFA_LOGGING_CONFIG_PATH,
                  encoding="utf-8") as file:
            custom_config = json.loads(file.read())
        if not isinstance(custom_config, dict):
            raise ValueError("Invalid logging config. Expected dict, got "
                             f"{type(custom_config).__name__}.")
        config = custom_config

    if config:
        dictConfig(config)


_init_logging()
