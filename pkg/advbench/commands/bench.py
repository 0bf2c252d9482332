"""Advbench bench command: the full repeated experiment."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import typer
from dataclasses_json import dataclass_json
from typing_extensions import Annotated

from advbench.commands.utils.options import ConfigOption, OutOption, SeedOption, require_config
from advbench.core.log import tracing
from advbench.core.normalizer import AdvbenchResultsNormalizer
from advbench.harness.runner import run_experiment
from advbench.metrics.records import BenchmarkResult

log = logging.getLogger(__name__)


@dataclass_json
@dataclass
class BenchResultsNormalizer(AdvbenchResultsNormalizer):
    """Per-run results of an experiment."""

    raw_results: List[BenchmarkResult] = field(default_factory=list)
    out_dir: str = ""
    config_hash: str = ""
    failed_runs: List[int] = field(default_factory=list)


@tracing
def bench(
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    repetitions: Annotated[
        Optional[int], typer.Option(help="Overrides experiment.repetitions.")
    ] = None,
    workers: Annotated[
        Optional[int], typer.Option(help="Worker processes, overrides experiment.workers.")
    ] = None,
):
    """Train and evaluate an adversary against the subject, once per repetition."""
    experiment = require_config(config, seed, {"experiment.repetitions": repetitions})
    outcome = run_experiment(experiment, out, workers)
    return BenchResultsNormalizer(
        service="bench",
        raw_results=outcome.results,
        arguments=dict(config=str(config), seed=seed, out=str(outcome.out_dir)),
        out_dir=str(outcome.out_dir),
        config_hash=outcome.manifest.config_hash,
        failed_runs=[r.index for r in outcome.manifest.failed()],
    )
