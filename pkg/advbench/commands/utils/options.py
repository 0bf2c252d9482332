"""Options shared by every advbench command."""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import typer
from typing_extensions import Annotated

from advbench.core.errors import ConfigurationError
from advbench.harness.config import ExperimentConfig, load_experiment_config

log = logging.getLogger(__name__)

ConfigOption = Annotated[
    Optional[Path], typer.Option("--config", "-c", help="Experiment config file.")
]
SeedOption = Annotated[
    Optional[int], typer.Option("--seed", help="Base seed, overrides experiment.base_seed.")
]
OutOption = Annotated[Optional[Path], typer.Option("--out", "-o", help="Output directory.")]


def seed_overrides(seed: Optional[int]) -> Dict[str, str]:
    return {} if seed is None else {"experiment.base_seed": str(seed)}


def require_config(
    config: Optional[Path],
    seed: Optional[int] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    """Load ``--config``, applying ``--seed`` and dotted-key overrides that are set."""
    if config is None:
        raise ConfigurationError("--config is required for this command")
    values = seed_overrides(seed)
    values.update(
        {key: str(value) for key, value in (overrides or {}).items() if value is not None}
    )
    return load_experiment_config(config, values)


def ignore_options(command: str, **values: Any):
    """Note common options passed to a command that does not use them."""
    passed = sorted(name for name, value in values.items() if value is not None)
    if passed:
        log.debug(f"{command} ignores --{', --'.join(passed)}")
