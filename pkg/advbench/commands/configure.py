"""Advbench configuration tool."""

import configparser
import logging
from dataclasses import dataclass
from enum import Enum

import typer
from dataclasses_json import dataclass_json
from typing_extensions import Annotated

from advbench.commands.utils.options import ConfigOption, OutOption, SeedOption, ignore_options
from advbench.core.config import get_config, write_config, write_to_config
from advbench.core.log import tracing
from advbench.core.normalizer import AdvbenchResultsNormalizer

log = logging.getLogger(__name__)

app = typer.Typer(help="Advbench Configuration Commands.")

configure_logging = typer.Typer(help="Configure Advbench Logging Commands.")

app.add_typer(configure_logging, name="logging")

LOGGING_SECTION = "advbench.logging"


class LoggingOptions(str, Enum):
    """Configure advbench logging."""

    trace = "trace"
    debug = "debug"
    verbose = "verbose"
    warning = "warning"


class ConfigureLogging(str, Enum):
    """Configure default logging options."""

    true = "true"
    false = "false"


LOGGING_DEFAULTS = {
    LoggingOptions.warning: "true",
    LoggingOptions.verbose: "false",
    LoggingOptions.debug: "false",
    LoggingOptions.trace: "false",
}


@dataclass_json
@dataclass
class ConfigurationNormalizer(AdvbenchResultsNormalizer):
    """Configuration Normalizer."""


@tracing
def set_defaults() -> configparser.ConfigParser:
    """Set default configuration values for advbench."""
    config = get_config()
    changed = False

    if not config.has_section(LOGGING_SECTION):
        config.add_section(LOGGING_SECTION)
        changed = True

    for option, value in LOGGING_DEFAULTS.items():
        if not config.has_option(LOGGING_SECTION, option.value):
            config[LOGGING_SECTION][option.value] = value
            changed = True

    if changed:
        write_config(config)

    return config


@configure_logging.command(name="defaults")
@tracing
def logging_defaults(
    option: LoggingOptions,
    status: Annotated[ConfigureLogging, typer.Option()],
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
):
    """Configure logging defaults."""
    ignore_options("configure logging defaults", config=config, seed=seed, out=out)
    write_to_config(LOGGING_SECTION, option.value, status.value)

    return ConfigurationNormalizer(
        service="configure",
        raw_results=[dict(option=option.value, status=status.value)],
    )


@configure_logging.command(name="list")
@tracing
def logging_list(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None):
    """List logging configuration."""
    ignore_options("configure logging list", config=config, seed=seed, out=out)
    settings = set_defaults()

    return ConfigurationNormalizer(
        service="configure",
        raw_results=[
            dict(option=name, status=value) for name, value in settings[LOGGING_SECTION].items()
        ],
    )
