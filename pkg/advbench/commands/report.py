"""Advbench report command."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List

import typer
from dataclasses_json import dataclass_json
from typing_extensions import Annotated

from advbench.commands.utils.options import ConfigOption, OutOption, SeedOption
from advbench.core.log import tracing
from advbench.core.normalizer import AdvbenchResultsNormalizer
from advbench.harness.config import load_experiment_config
from advbench.harness.report import build_report
from advbench.metrics.records import AggregateResult

log = logging.getLogger(__name__)


@dataclass_json
@dataclass
class ReportNormalizer(AdvbenchResultsNormalizer):
    raw_results: List[AggregateResult] = field(default_factory=list)
    files: List[str] = field(default_factory=list)


@tracing
def report(
    results: Annotated[Path, typer.Argument(help="Experiment directory.")],
    plots: Annotated[bool, typer.Option("--plots", help="Also write SVG plots.")] = False,
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
):
    """
    Aggregate statistics of an experiment directory, optionally with plots.

    ``--config`` supplies the convergence window of the curves' moving mean,
    otherwise the one recorded in the manifest is used. ``--out`` is accepted
    like on every command; files are written next to the results.
    """
    window = None
    if config is not None:
        window = load_experiment_config(config).convergence.window
    written = build_report(results, plots=plots, window=window)
    return ReportNormalizer(
        service="report",
        raw_results=[written.aggregate],
        arguments=dict(results=str(results), plots=plots),
        files=written.files,
    )
