"""A trained actor network driving as a policy."""

import logging
from pathlib import Path
from typing import Optional, Union

from advbench.core.errors import ShapeError
from advbench.policies.base import Policy
from advbench.policies.observation import Observation, SensorConfig
from advbench.rl.checkpoint import load_checkpoint
from advbench.rl.mlp import BoundedHead, Mlp
from advbench.sim.vehicle import ACTION_HIGH, ACTION_LOW, Action

log = logging.getLogger(__name__)


def actor_head() -> BoundedHead:
    return BoundedHead(tuple(ACTION_LOW), tuple(ACTION_HIGH))


class LearnedPolicy(Policy):
    """Deterministic actor output, no exploration noise."""

    name = "learned"

    def __init__(self, actor: Mlp, sensor: Optional[SensorConfig] = None):
        super().__init__(sensor)
        if actor.layer_sizes[0] != self.sensor.vector_size:
            raise ShapeError(
                f"actor expects {actor.layer_sizes[0]} inputs, "
                f"sensor produces {self.sensor.vector_size}"
            )
        self.actor = actor

    def act(self, observation: Observation) -> Action:
        return Action.from_array(self.actor.forward(observation.to_vector()))


def learned_policy(actor: Mlp, sensor: Optional[SensorConfig] = None) -> LearnedPolicy:
    return LearnedPolicy(actor, sensor)


def load_learned_policy(
    path: Union[str, Path], sensor: Optional[SensorConfig] = None
) -> LearnedPolicy:
    log.debug(f"Loading actor from {path}...")
    return LearnedPolicy(load_checkpoint(path, actor_head()), sensor)
