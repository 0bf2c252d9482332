"""Advbench user configuration file."""

import configparser
import logging
import os
from pathlib import Path

log = logging.getLogger(__name__)

CONFIG_ENV = "ADVBENCH_CONFIG"
DEFAULT_CONFIG_PATH = Path.home() / ".advbench" / "config"


def get_config_path() -> Path:
    """Location of the user configuration file."""
    return Path(os.environ.get(CONFIG_ENV, DEFAULT_CONFIG_PATH))


def get_config() -> configparser.ConfigParser:
    """
    Read the user configuration file.

    Returns
    -------
    configparser.ConfigParser
        Parsed configuration, empty if the file does not exist yet
    """
    config = configparser.ConfigParser(interpolation=None)
    path = get_config_path()
    if path.exists():
        log.debug(f"Reading configuration from {path}...")
        config.read(path, encoding="utf-8")
    return config


def write_config(config: configparser.ConfigParser):
    """Persist the user configuration file."""
    path = get_config_path()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as fp:
            config.write(fp)
    except OSError as exc:
        log.warning(f"Unable to write configuration to {path}: {exc}")


def write_to_config(section: str, option: str, value: str):
    """Set a single option and persist the configuration."""
    config = get_config()
    if not config.has_section(section):
        config.add_section(section)
    config[section][option] = value
    write_config(config)
