"""Ornstein-Uhlenbeck exploration noise."""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class OuNoise:
    """
    Discrete Ornstein-Uhlenbeck process, one independent channel per action dimension.

    ``x <- x + theta * (mu - x) * dt + sigma * sqrt(dt) * N(0, 1)``
    """

    size: int
    theta: float = 0.15
    mu: float = 0.0
    sigma: float = 0.2
    dt: float = 1.0
    seed: Optional[int] = None
    state: np.ndarray = field(init=False)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)
        self.base_sigma = self.sigma
        self.reset()

    def reset(self):
        self.state = np.full(self.size, self.mu, dtype=np.float64)

    def sample(self) -> np.ndarray:
        drift = self.theta * (self.mu - self.state) * self.dt
        diffusion = self.sigma * math.sqrt(self.dt) * self.rng.standard_normal(self.size)
        self.state = self.state + drift + diffusion
        return self.state.copy()

    def anneal(self, progress: float, floor: float = 0.1, span: float = 0.5):
        """Linearly shrink sigma to ``floor * base`` by ``span`` of training, then hold."""
        fraction = min(max(progress / span, 0.0), 1.0) if span > 0 else 1.0
        self.sigma = self.base_sigma * (1.0 - (1.0 - floor) * fraction)

    def stationary_variance(self) -> float:
        """Variance of the discrete recursion at equilibrium."""
        return self.sigma**2 / (2.0 * self.theta - self.theta**2 * self.dt)


def ou_sample(noise: OuNoise) -> np.ndarray:
    return noise.sample()
