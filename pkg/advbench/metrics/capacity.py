"""Capacity threshold: how much traffic a subject tolerates."""

import logging
from typing import Callable, Dict, Optional, Sequence

from advbench.core.errors import UsageError
from advbench.env import DrivingEnv, run_episode
from advbench.policies.base import Policy

log = logging.getLogger(__name__)

SAFE_RATE = 0.95


def safe_rate(env: DrivingEnv, policy: Policy, trials: int, base_seed: int = 0) -> float:
    """Fraction of ``trials`` episodes in which the subject never collides."""
    safe = 0
    for trial in range(trials):
        outcome = run_episode(env, policy, base_seed + trial, episode=trial, record_frames=False)
        if not outcome.collided(env.learner_id):
            safe += 1
    return safe / trials


def capacity_scan(
    env_factory: Callable[[int], DrivingEnv],
    subject_policy: Policy,
    n_range: Sequence[int],
    trials: int,
    base_seed: int = 0,
) -> Dict[int, float]:
    """Collision-free rate for every traffic count in ``n_range``, same seeds for each."""
    if not n_range:
        raise UsageError("capacity scan needs at least one traffic count")
    if list(n_range) != sorted(n_range):
        raise UsageError("capacity scan traffic counts must be ascending")
    if trials < 1:
        raise UsageError("capacity scan needs at least one trial per count")
    rates = {}
    for n in n_range:
        rates[n] = safe_rate(env_factory(n), subject_policy, trials, base_seed)
        log.info(f"capacity n={n}: {rates[n]:.2%} collision-free")
    return rates


def threshold_from_rates(rates: Dict[int, float], required: float = SAFE_RATE) -> Optional[int]:
    safe = [n for n, rate in rates.items() if rate >= required]
    return max(safe) if safe else None


def capacity_threshold(
    env_factory: Callable[[int], DrivingEnv],
    subject_policy: Policy,
    n_range: Sequence[int],
    trials: int,
    base_seed: int = 0,
) -> Optional[int]:
    """
    Largest traffic count at which the subject stays collision-free in at least
    95% of trials; ``None`` when no count in range qualifies.

    Every count in ``n_range`` is evaluated; the rate is not assumed to fall with ``n``.
    """
    return threshold_from_rates(
        capacity_scan(env_factory, subject_policy, n_range, trials, base_seed)
    )
