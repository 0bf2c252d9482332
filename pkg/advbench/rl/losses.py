"""Scalar losses over network outputs."""

from dataclasses import dataclass

import numpy as np


@dataclass
class SquaredError:
    """Squared error against fixed targets, averaged or summed over the batch."""

    targets: np.ndarray
    reduction: str = "mean"

    def _scale(self, outputs: np.ndarray) -> float:
        return 1.0 / outputs.shape[0] if self.reduction == "mean" else 1.0

    def value(self, outputs: np.ndarray) -> float:
        diff = outputs - np.asarray(self.targets).reshape(outputs.shape)
        return float(np.sum(diff**2) * self._scale(outputs))

    def grad(self, outputs: np.ndarray) -> np.ndarray:
        diff = outputs - np.asarray(self.targets).reshape(outputs.shape)
        return 2.0 * diff * self._scale(outputs)


@dataclass
class LinearLoss:
    """``sum(weights * outputs)``; the actor update feeds critic gradients through it."""

    weights: np.ndarray

    def value(self, outputs: np.ndarray) -> float:
        return float(np.sum(np.asarray(self.weights) * outputs))

    def grad(self, outputs: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.weights, dtype=np.float64), outputs.shape).copy()


@dataclass
class ConstantLoss:
    constant: float = 0.0

    def value(self, outputs: np.ndarray) -> float:
        return self.constant

    def grad(self, outputs: np.ndarray) -> np.ndarray:
        return np.zeros_like(outputs)
