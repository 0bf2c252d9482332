"""Centerline-following policies: the null baseline and scripted traffic."""

import math
from dataclasses import replace
from typing import Optional, Tuple

from advbench.core.errors import ConfigurationError
from advbench.policies.base import Policy, heading_to_command, speed_command
from advbench.policies.observation import Observation, SensorConfig
from advbench.sim.geometry import rotate_to_frame
from advbench.sim.track import point_at
from advbench.sim.vehicle import Action


def pursuit_steering(target: Tuple[float, float], wheelbase: float) -> float:
    """Pure pursuit steering angle toward a body-frame target point."""
    lx, ly = target
    distance = math.hypot(lx, ly)
    if distance == 0.0:
        return 0.0
    alpha = math.atan2(ly, lx)
    return math.atan(2.0 * wheelbase * math.sin(alpha) / distance)


class NullPolicy(Policy):
    """Drives the centerline at a target speed and ignores every other vehicle."""

    name = "null"

    def __init__(
        self,
        target_speed: float = 10.0,
        speed_gain: float = 0.5,
        sensor: Optional[SensorConfig] = None,
    ):
        super().__init__(sensor)
        if target_speed <= 0 or speed_gain <= 0:
            raise ConfigurationError("target_speed and speed_gain must be > 0")
        self.target_speed = target_speed
        self.speed_gain = speed_gain

    def target_point(self, observation: Observation) -> Tuple[float, float]:
        return observation.lookahead

    def act(self, observation: Observation) -> Action:
        angle = pursuit_steering(
            self.target_point(observation), observation.own_spec.wheelbase
        )
        regulated = speed_command(observation.speed, self.target_speed, self.speed_gain)
        return replace(
            regulated,
            steering_command=heading_to_command(angle, observation.own_spec.max_steering),
        )


class TrafficBot(NullPolicy):
    """Scripted traffic holding its own lane offset and cruise speed."""

    name = "traffic"

    def __init__(
        self,
        target_speed: float = 8.0,
        lateral_offset: float = 0.0,
        speed_gain: float = 0.5,
        sensor: Optional[SensorConfig] = None,
    ):
        super().__init__(target_speed, speed_gain, sensor)
        self.lateral_offset = lateral_offset

    def target_point(self, observation: Observation) -> Tuple[float, float]:
        if self.lateral_offset == 0.0:
            return observation.lookahead
        state = observation.own_state
        target, _ = point_at(
            observation.track,
            observation.frame.arc_progress + observation.sensor.lookahead,
            self.lateral_offset,
        )
        return rotate_to_frame(
            target.x - state.position.x, target.y - state.position.y, state.heading
        )


def null_policy(target_speed: float = 10.0, sensor: Optional[SensorConfig] = None):
    return NullPolicy(target_speed=target_speed, sensor=sensor)


def traffic_bot(
    target_speed: float = 8.0,
    lateral_offset: float = 0.0,
    sensor: Optional[SensorConfig] = None,
):
    return TrafficBot(
        target_speed=target_speed, lateral_offset=lateral_offset, sensor=sensor
    )
