"""Uniform interface for policies under test and scripted vehicles."""

import math
from abc import ABC, abstractmethod
from typing import Optional

from advbench.policies.observation import Observation, SensorConfig, observe
from advbench.sim.vehicle import Action
from advbench.sim.world import WorldState


class Policy(ABC):
    """
    A driving policy.

    ``act`` must be a pure function of the observation and the policy's own
    internal state; policies never look at the world directly.
    """

    name = "policy"

    def __init__(self, sensor: Optional[SensorConfig] = None):
        self.sensor = sensor or SensorConfig()

    def observe(self, world: WorldState, own_id: str) -> Observation:
        return observe(world, own_id, self.sensor)

    @abstractmethod
    def act(self, observation: Observation) -> Action:
        """Choose the action for this step."""

    def reset(self):
        """Clear internal state at the start of an episode."""


class ConstantPolicy(Policy):
    """Applies the same action every step."""

    name = "constant"

    def __init__(self, action: Action, sensor: Optional[SensorConfig] = None):
        super().__init__(sensor)
        self.action = action

    def act(self, observation: Observation) -> Action:
        return self.action


def speed_command(speed: float, target: float, gain: float) -> Action:
    """Throttle/brake regulation toward a target speed, no steering."""
    error = target - speed
    if error >= 0:
        return Action(throttle=min(gain * error, 1.0))
    return Action(brake=min(-gain * error, 1.0))


def heading_to_command(angle: float, max_steering: float) -> float:
    """Map a desired steering angle to a normalized steering command."""
    return max(-1.0, min(1.0, angle / max_steering)) if math.isfinite(angle) else 0.0
