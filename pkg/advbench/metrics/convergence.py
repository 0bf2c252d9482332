"""Training-time metrics."""

import logging
from typing import Optional, Sequence

import numpy as np

from advbench.metrics.records import ConvergenceCriterion, TrainingRecord

log = logging.getLogger(__name__)


def relative_change(current: float, previous: float) -> float:
    scale = abs(previous)
    if scale == 0.0:
        return 0.0 if current == 0.0 else float("inf")
    return abs(current - previous) / scale


def window_means(returns: Sequence[float], window: int) -> np.ndarray:
    """``means[e]`` is the mean of ``returns[e - window:e]`` for ``e >= window``."""
    values = np.asarray(returns, dtype=np.float64)
    cumulative = np.concatenate([[0.0], np.cumsum(values)])
    means = np.full(len(values) + 1, np.nan)
    means[window:] = (cumulative[window:] - cumulative[:-window]) / window
    return means


def episodes_to_convergence(
    record: TrainingRecord, crit: Optional[ConvergenceCriterion] = None
) -> Optional[int]:
    """
    First episode at which the return has plateaued, or ``None``.

    Episode ``e`` qualifies when ``e >= min_episodes``, the mean over
    ``[e - window, e)`` differs from the mean over the preceding window by
    less than ``epsilon`` relative, and the window after ``e`` does the same
    against ``[e - window, e)``.

    Parameters
    ----------
    record : TrainingRecord
        Training run
    crit : ConvergenceCriterion, optional
        Plateau definition, defaults apply when omitted

    Returns
    -------
    Optional[int]
        Episode index, ``None`` when not converged
    """
    crit = crit or ConvergenceCriterion()
    w = crit.window
    n = len(record.returns)
    means = window_means(record.returns, w)
    for e in range(max(crit.min_episodes, 2 * w), n - w + 1):
        if relative_change(means[e], means[e - w]) >= crit.epsilon:
            continue
        if relative_change(means[e + w], means[e]) < crit.epsilon:
            log.debug(f"converged at episode {e} (window mean {means[e]})")
            return e
    return None


def optimal_return(
    record: TrainingRecord,
    converged_at: Optional[int],
    crit: Optional[ConvergenceCriterion] = None,
) -> float:
    """Mean return over the converged window; the final window when not converged."""
    crit = crit or ConvergenceCriterion()
    returns = record.returns
    if not returns:
        return 0.0
    end = converged_at if converged_at is not None else len(returns)
    start = max(end - crit.window, 0)
    return float(np.mean(returns[start:end]))
