"""Aggregate tables and plot files for finished experiments."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

from advbench.core.log import tracing
from advbench.harness.manifest import RunStatus
from advbench.harness.plots import histogram_svg, write_curve, write_svg
from advbench.harness.runner import load_results
from advbench.metrics.aggregate import aggregate
from advbench.metrics.compare import ComparisonReport, compare
from advbench.metrics.episodes import time_to_collision
from advbench.metrics.records import AggregateResult, TrainingRecord
from advbench.pandas.results import write_aggregate_csv
from advbench.rewards import ObjectiveKind
from advbench.sim.trace import read_trace, split_episodes

log = logging.getLogger(__name__)

AGGREGATE_FILE = "aggregate.csv"
HISTOGRAM_FILE = "ttc_histogram.svg"


@dataclass
class ReportFiles:
    aggregate: AggregateResult
    files: List[str] = field(default_factory=list)


def load_aggregate(out_dir: Union[str, Path]) -> AggregateResult:
    _, results = load_results(out_dir)
    return aggregate(results)


def evaluation_times(
    out_dir: Path,
    trace_names: List[str],
    objective: str,
    target: str = "subject",
    adversary: str = "adversary",
) -> List[float]:
    """Per-episode times to collision across every trace of an experiment."""
    kind = ObjectiveKind(objective)
    times = []
    for name in trace_names:
        path = out_dir / name
        if not path.exists():
            continue
        for episode in split_episodes(read_trace(path)):
            ttc = time_to_collision(episode, target, adversary, kind)
            if ttc is not None:
                times.append(ttc)
    return times


@tracing
def build_report(
    out_dir: Union[str, Path], plots: bool = False, window: Optional[int] = None
) -> ReportFiles:
    """
    Write ``aggregate.csv`` and, with ``plots``, a training curve per run and
    the evaluation time-to-collision histogram.
    """
    out_dir = Path(out_dir)
    manifest, results = load_results(out_dir)
    summary = aggregate(results)
    files = [str(write_aggregate_csv([summary], out_dir / AGGREGATE_FILE))]
    if not plots:
        return ReportFiles(summary, files)

    window = window or int(manifest.config.get("convergence.window", "50"))
    traces = []
    for entry in manifest.runs:
        if entry.status != RunStatus.completed:
            continue
        record_path = out_dir / entry.artifacts["record"]
        record = TrainingRecord.from_dict(json.loads(record_path.read_text(encoding="utf-8")))
        files.append(str(write_curve(record, out_dir / entry.artifacts["curve"], window)))
        traces.append(entry.artifacts["trace"])

    times = evaluation_times(out_dir, traces, summary.objective)
    histogram = histogram_svg(times, title=f"Time to collision, {summary.subject}")
    files.append(str(write_svg(histogram, out_dir / HISTOGRAM_FILE)))
    log.info(f"report for {out_dir}: {len(files)} files")
    return ReportFiles(summary, files)


@tracing
def compare_dirs(dir_a: Union[str, Path], dir_b: Union[str, Path]) -> ComparisonReport:
    """Comparison table of two experiment directories."""
    return compare(load_aggregate(dir_a), load_aggregate(dir_b))
