"""Stochastic gradient descent with momentum."""

from typing import List, Optional

import numpy as np


def clip_by_global_norm(grads: List[np.ndarray], max_norm: Optional[float]) -> float:
    """Rescale gradients in place so their joint norm is at most ``max_norm``; returns the norm."""
    norm = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads)))
    if max_norm is not None and norm > max_norm:
        scale = max_norm / norm
        for g in grads:
            g *= scale
    return norm


class MomentumSgd:
    """Updates parameter arrays in place."""

    def __init__(self, params: List[np.ndarray], lr: float, momentum: float = 0.9):
        self.params = params
        self.lr = lr
        self.momentum = momentum
        self.velocity = [np.zeros_like(p) for p in params]

    def step(self, grads: List[np.ndarray]):
        for param, velocity, grad in zip(self.params, self.velocity, grads):
            velocity *= self.momentum
            velocity -= self.lr * grad
            param += velocity
