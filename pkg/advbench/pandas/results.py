"""Pandas functions for benchmark result tables."""

import logging
import math
from pathlib import Path
from typing import List, Sequence, Union

import pandas as pd

from advbench.metrics.records import METRIC_NAMES, AggregateResult, BenchmarkResult

log = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
RESULT_COLUMNS = [
    "run",
    "seed",
    "subject",
    "objective",
    "episodes_trained",
    *METRIC_NAMES,
]
SUMMARY_FIELDS = ("mean", "std", "min", "max", "count")


def results_frame(results: Sequence[BenchmarkResult]) -> pd.DataFrame:
    """One row per run, columns in a fixed order.

    Parameters
    ----------
    results : Sequence[BenchmarkResult]
        Per-run results

    Returns
    -------
    pd.DataFrame
        Results table; metrics that do not apply are NaN
    """
    df = pd.DataFrame([r.to_dict() for r in results], columns=RESULT_COLUMNS)
    return df.sort_values("run", kind="stable").reset_index(drop=True)


def write_results_csv(results: Sequence[BenchmarkResult], path: Union[str, Path]) -> Path:
    path = Path(path)
    results_frame(results).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    log.debug(f"Wrote {len(results)} results to {path}...")
    return path


def _optional(value, cast):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return cast(value)


def read_results_csv(path: Union[str, Path]) -> List[BenchmarkResult]:
    """Read a results file written by :func:`write_results_csv`, floats bit-exact."""
    # "null" is a subject name, not a missing value
    df = pd.read_csv(
        path, float_precision="round_trip", keep_default_na=False, na_values=[""]
    )
    results = []
    for row in df.to_dict(orient="records"):
        results.append(
            BenchmarkResult(
                subject=str(row["subject"]),
                objective=str(row["objective"]),
                seed=int(row["seed"]),
                episodes_to_convergence=_optional(row["episodes_to_convergence"], int),
                optimal_return=float(row["optimal_return"]),
                time_to_collision=_optional(row["time_to_collision"], float),
                distance_to_collision=_optional(row["distance_to_collision"], float),
                damage_target=float(row["damage_target"]),
                damage_adversary=float(row["damage_adversary"]),
                success_rate=float(row["success_rate"]),
                episodes_trained=int(row["episodes_trained"]),
                run=int(row["run"]),
            )
        )
    return results


def aggregate_frame(aggregates: Sequence[AggregateResult]) -> pd.DataFrame:
    """One row per subject and objective, ``<metric>_<statistic>`` columns."""
    rows = []
    for agg in aggregates:
        row = {
            "subject": agg.subject,
            "objective": agg.objective,
            "runs": agg.runs,
            "not_converged": agg.not_converged,
        }
        for metric in METRIC_NAMES:
            summary = agg.summary(metric)
            for stat in SUMMARY_FIELDS:
                row[f"{metric}_{stat}"] = getattr(summary, stat)
        rows.append(row)
    return pd.DataFrame(rows)


def write_aggregate_csv(aggregates: Sequence[AggregateResult], path: Union[str, Path]) -> Path:
    path = Path(path)
    aggregate_frame(aggregates).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    log.debug(f"Wrote aggregate table {path}...")
    return path
