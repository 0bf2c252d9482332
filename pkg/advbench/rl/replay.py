"""Fixed-capacity FIFO experience replay."""

from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from advbench.core.errors import ShapeError, UsageError


@dataclass(frozen=True)
class Transition:
    s: np.ndarray
    a: np.ndarray
    r: float
    s_next: np.ndarray
    done: bool


class Batch(NamedTuple):
    s: np.ndarray
    a: np.ndarray
    r: np.ndarray
    s_next: np.ndarray
    done: np.ndarray


class ReplayBuffer:
    """Ring buffer over preallocated arrays; the oldest transition is evicted first."""

    def __init__(self, capacity: int, obs_dim: int, action_dim: int, seed: Optional[int] = None):
        if capacity < 1:
            raise UsageError("replay capacity must be >= 1")
        self.capacity = capacity
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.rng = np.random.default_rng(seed)
        self._s = np.zeros((capacity, obs_dim))
        self._a = np.zeros((capacity, action_dim))
        self._r = np.zeros(capacity)
        self._s_next = np.zeros((capacity, obs_dim))
        self._done = np.zeros(capacity)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def add(self, transition: Transition):
        s = np.asarray(transition.s, dtype=np.float64)
        a = np.asarray(transition.a, dtype=np.float64)
        s_next = np.asarray(transition.s_next, dtype=np.float64)
        if s.shape != (self.obs_dim,) or s_next.shape != (self.obs_dim,):
            raise ShapeError(f"observation must have shape ({self.obs_dim},)")
        if a.shape != (self.action_dim,):
            raise ShapeError(f"action must have shape ({self.action_dim},)")
        idx = self._next
        self._s[idx] = s
        self._a[idx] = a
        self._r[idx] = transition.r
        self._s_next[idx] = s_next
        self._done[idx] = 1.0 if transition.done else 0.0
        self._next = (idx + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def _ordered_indices(self) -> np.ndarray:
        start = self._next if self._size == self.capacity else 0
        return (start + np.arange(self._size)) % self.capacity

    def transitions(self) -> List[Transition]:
        """Stored transitions, oldest first."""
        return [
            Transition(
                self._s[i].copy(),
                self._a[i].copy(),
                float(self._r[i]),
                self._s_next[i].copy(),
                bool(self._done[i]),
            )
            for i in self._ordered_indices()
        ]

    def sample(self, batch_size: int) -> Batch:
        """Uniform batch without replacement."""
        if batch_size > self._size:
            raise UsageError(f"cannot sample {batch_size} from {self._size} transitions")
        idx = self.rng.choice(self._size, size=batch_size, replace=False)
        return Batch(
            self._s[idx], self._a[idx], self._r[idx], self._s_next[idx], self._done[idx]
        )
