"""
Logger and configuration utility module for full_house.

Author: Ron Webb
Since: 1.0.0
"""

import configparser
import logging
import logging.config
import os

from dotenv import load_dotenv

CONFIG_ENV_VAR = "FULL_HOUSE_CONFIG"


def _project_file(name: str) -> str:
    """
    Resolve a file that lives at the project root, next to the package directory.

    Args:
        name: The file name.
    Returns:
        Absolute path of the file.
    """
    return os.path.join(os.path.dirname(os.path.dirname(__file__)), name)


def load_config(extra_path: str | None = None) -> configparser.ConfigParser:
    """
    Load and return the configparser object for config.ini.

    The project defaults are read first, then the file named by the
    FULL_HOUSE_CONFIG environment variable (a .env file is honoured), then
    ``extra_path``. Later files override earlier ones key by key.

    Args:
        extra_path: Optional user configuration file layered last.
    Returns:
        ConfigParser object with the merged configuration.
    Raises:
        FileNotFoundError: If ``extra_path`` is given but does not exist.
    """
    load_dotenv()
    config = configparser.ConfigParser()
    config.read(_project_file("config.ini"))

    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        config.read(env_path)

    if extra_path:
        if not os.path.isfile(extra_path):
            raise FileNotFoundError(f"Config file not found: {extra_path}")
        config.read(extra_path)
    return config


def setup_logger(name: str) -> logging.Logger:
    """
    Set up and return a logger configured using logging.ini.

    Args:
        name: The name of the logger.
    Returns:
        Configured logger instance.
    """
    logging.config.fileConfig(
        _project_file("logging.ini"), disable_existing_loggers=False
    )
    return logging.getLogger(name)
