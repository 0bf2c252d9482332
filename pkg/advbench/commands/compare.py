"""Advbench compare command."""

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
from advbench.harness.report import compare_dirs
from advbench.metrics.compare import ComparisonReport

log = logging.getLogger(__name__)

COMPARISON_FILE = "comparison.txt"


@dataclass_json
@dataclass
class ComparisonNormalizer(AdvbenchResultsNormalizer):
    raw_results: List[ComparisonReport] = field(default_factory=list)

    def render(self) -> str:
        return "".join(report.render() for report in self.raw_results)


@tracing
def compare(
    results_a: Annotated[Path, typer.Argument(help="Experiment directory of subject A.")],
    results_b: Annotated[Path, typer.Argument(help="Experiment directory of subject B.")],
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
):
    """
    Table of both subjects' aggregates with resilience and robustness labels.

    ``--config`` and ``--seed`` are accepted like on every command; the
    comparison reads only the two result directories.
    """
    report = compare_dirs(results_a, results_b)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / COMPARISON_FILE).write_text(report.render(), encoding="utf-8")
    return ComparisonNormalizer(
        service="compare",
        raw_results=[report],
        arguments=dict(results_a=str(results_a), results_b=str(results_b)),
    )
