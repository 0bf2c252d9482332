"""Statistics over repeated runs."""

import logging
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from advbench.core.errors import UsageError
from advbench.metrics.records import METRIC_NAMES, AggregateResult, BenchmarkResult, MetricSummary

log = logging.getLogger(__name__)

# metrics reported only for runs whose adversary converged
CONVERGED_ONLY = {
    "episodes_to_convergence",
    "optimal_return",
    "time_to_collision",
    "distance_to_collision",
}


def summarize(values: Sequence[float]) -> MetricSummary:
    """Population statistics; values are sorted first so the result ignores input order."""
    if not values:
        return MetricSummary(count=0)
    data = np.sort(np.asarray(values, dtype=np.float64))
    return MetricSummary(
        count=int(data.size),
        mean=float(np.mean(data)),
        std=float(np.std(data)),
        min=float(data[0]),
        max=float(data[-1]),
    )


def applicable(results: Sequence[BenchmarkResult], metric: str) -> List[float]:
    values = []
    for result in results:
        if metric in CONVERGED_ONLY and not result.converged:
            continue
        value = getattr(result, metric)
        if value is not None:
            values.append(float(value))
    return values


def aggregate(results: Sequence[BenchmarkResult]) -> AggregateResult:
    """
    Mean, standard deviation, min and max of every metric over applicable runs.

    Raises
    ------
    UsageError
        ``results`` is empty or mixes subjects or objectives
    """
    if not results:
        raise UsageError("cannot aggregate an empty result list")
    subjects = {r.subject for r in results}
    objectives = {r.objective for r in results}
    if len(subjects) > 1 or len(objectives) > 1:
        raise UsageError(
            f"results mix subjects {sorted(subjects)} or objectives {sorted(objectives)}"
        )
    metrics: Dict[str, MetricSummary] = {
        metric: summarize(applicable(results, metric)) for metric in METRIC_NAMES
    }
    not_converged = sum(1 for r in results if not r.converged)
    log.debug(f"aggregated {len(results)} runs, {not_converged} not converged")
    return AggregateResult(
        subject=results[0].subject,
        objective=results[0].objective,
        runs=len(results),
        not_converged=not_converged,
        metrics=metrics,
    )


def mean_or_none(values: Sequence[Optional[float]], reducer: Callable = np.mean) -> Optional[float]:
    present = [v for v in values if v is not None]
    return float(reducer(present)) if present else None
