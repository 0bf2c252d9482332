"""Advbench train command: one training run."""

import logging

import typer
from typing_extensions import Annotated

from advbench.commands.utils.options import ConfigOption, OutOption, SeedOption, require_config
from advbench.core.errors import DivergenceError
from advbench.core.log import tracing
from advbench.core.normalizer import AdvbenchResult
from advbench.harness.runner import execute_run

log = logging.getLogger(__name__)


@tracing
def train(
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    run: Annotated[int, typer.Option(help="Run index; the run seed is base seed + index.")] = 0,
):
    """Train one learner, evaluate it and write its checkpoint, trace and record."""
    experiment = require_config(config, seed)
    out_dir = experiment.output_dir(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outcome = execute_run(experiment, run, out_dir)
    if outcome.failed:
        raise DivergenceError(outcome.error)
    return AdvbenchResult(
        service="train",
        raw_results=outcome.result,
        arguments=dict(config=str(config), seed=seed, out=str(out_dir), run=run),
    )
