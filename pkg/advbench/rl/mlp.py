"""Fully connected networks with hand-written backpropagation."""

import copy
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from advbench.core.errors import ShapeError


@dataclass(frozen=True)
class IdentityHead:
    """Linear output."""

    def apply(self, z: np.ndarray) -> np.ndarray:
        return z

    def derivative(self, z: np.ndarray) -> np.ndarray:
        return np.ones_like(z)


@dataclass(frozen=True)
class BoundedHead:
    """``tanh`` output rescaled per dimension to ``[low, high]``."""

    low: Tuple[float, ...]
    high: Tuple[float, ...]

    def apply(self, z: np.ndarray) -> np.ndarray:
        low, high = np.asarray(self.low), np.asarray(self.high)
        return low + 0.5 * (np.tanh(z) + 1.0) * (high - low)

    def derivative(self, z: np.ndarray) -> np.ndarray:
        low, high = np.asarray(self.low), np.asarray(self.high)
        return 0.5 * (1.0 - np.tanh(z) ** 2) * (high - low)


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_derivative(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0, 1.0, 0.0)


class Mlp:
    """
    Multi-layer perceptron: ReLU hidden layers and a configurable output head.

    Weights are stored ``(out, in)``; ``parameters()`` lists them layer by
    layer as weight then bias.
    """

    def __init__(
        self,
        layer_sizes: Sequence[int],
        head=None,
        rng: Optional[np.random.Generator] = None,
        final_scale: float = 3e-3,
    ):
        if len(layer_sizes) < 2 or any(int(n) < 1 for n in layer_sizes):
            raise ShapeError(f"invalid layer sizes {list(layer_sizes)}")
        self.layer_sizes = [int(n) for n in layer_sizes]
        self.head = head or IdentityHead()
        if isinstance(self.head, BoundedHead) and len(self.head.low) != self.layer_sizes[-1]:
            raise ShapeError("bounded head size does not match output layer")
        rng = rng or np.random.default_rng(0)
        self.weights: List[np.ndarray] = []
        self.biases: List[np.ndarray] = []
        last = len(self.layer_sizes) - 2
        for idx, (fan_in, fan_out) in enumerate(zip(self.layer_sizes, self.layer_sizes[1:])):
            bound = final_scale if idx == last else 1.0 / np.sqrt(fan_in)
            self.weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
            self.biases.append(rng.uniform(-bound, bound, size=fan_out))

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_size(self) -> int:
        return self.layer_sizes[-1]

    def parameters(self) -> List[np.ndarray]:
        params = []
        for weight, bias in zip(self.weights, self.biases):
            params.extend([weight, bias])
        return params

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def flat_parameters(self) -> np.ndarray:
        return np.concatenate([p.ravel() for p in self.parameters()])

    def set_flat_parameters(self, values: np.ndarray):
        values = np.asarray(values, dtype=np.float64)
        if values.size != self.parameter_count():
            raise ShapeError(
                f"expected {self.parameter_count()} parameters, got {values.size}"
            )
        offset = 0
        for param in self.parameters():
            param[...] = values[offset : offset + param.size].reshape(param.shape)
            offset += param.size

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters())

    def copy(self) -> "Mlp":
        return copy.deepcopy(self)

    def _as_batch(self, inputs) -> Tuple[np.ndarray, bool]:
        x = np.asarray(inputs, dtype=np.float64)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.input_size:
            raise ShapeError(
                f"expected input of width {self.input_size}, got shape {np.shape(inputs)}"
            )
        return x, single

    def forward_with_cache(self, inputs) -> Tuple[np.ndarray, list]:
        """Batch forward pass keeping the activations needed by ``backward``."""
        x, _ = self._as_batch(inputs)
        cache = []
        activation = x
        for idx, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            z = activation @ weight.T + bias
            cache.append((activation, z))
            activation = relu(z) if idx < len(self.weights) - 1 else self.head.apply(z)
        return activation, cache

    def forward(self, inputs) -> np.ndarray:
        """Evaluate the network on one input vector or a batch of rows."""
        _, single = self._as_batch(inputs)
        outputs, _ = self.forward_with_cache(inputs)
        return outputs[0] if single else outputs

    def backward(self, cache: list, grad_outputs: np.ndarray) -> Tuple[List[np.ndarray], np.ndarray]:
        """
        Reverse-mode pass.

        Parameters
        ----------
        cache : list
            From ``forward_with_cache``
        grad_outputs : np.ndarray
            Gradient of the scalar loss w.r.t. the batch outputs

        Returns
        -------
        Tuple[List[np.ndarray], np.ndarray]
            Gradients aligned with ``parameters()`` and the input gradient
        """
        grad = np.asarray(grad_outputs, dtype=np.float64)
        grads: List[np.ndarray] = [None] * (2 * len(self.weights))
        for idx in reversed(range(len(self.weights))):
            activation, z = cache[idx]
            if idx == len(self.weights) - 1:
                dz = grad * self.head.derivative(z)
            else:
                dz = grad * relu_derivative(z)
            grads[2 * idx] = dz.T @ activation
            grads[2 * idx + 1] = dz.sum(axis=0)
            grad = dz @ self.weights[idx]
        return grads, grad


def gradients(net: Mlp, loss, batch) -> List[np.ndarray]:
    """Exact parameter gradients of ``loss`` evaluated on ``batch`` inputs."""
    outputs, cache = net.forward_with_cache(batch)
    grads, _ = net.backward(cache, loss.grad(outputs))
    return grads
