"""Artificial potential field avoidance."""

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError
from advbench.policies.base import Policy, heading_to_command, speed_command
from advbench.policies.observation import Contact, Observation, SensorConfig
from advbench.sim.geometry import wrap_angle
from advbench.sim.vehicle import Action

# a coincident opponent pushes hard left
COINCIDENT_PUSH = np.array([0.0, math.inf])


@dataclass_json
@dataclass(frozen=True)
class PotentialFieldGains:
    k_att: float = 1.0
    k_rep: float = 200.0
    target_speed: float = 10.0
    slow_radius: float = 25.0
    min_speed_fraction: float = 0.3
    speed_gain: float = 0.5

    def __post_init__(self):
        if self.k_att <= 0 or self.k_rep <= 0:
            raise ConfigurationError("potential field gains must be > 0")
        if self.target_speed <= 0 or self.slow_radius <= 0 or self.speed_gain <= 0:
            raise ConfigurationError("potential field speed settings must be > 0")
        if not 0 < self.min_speed_fraction <= 1:
            raise ConfigurationError("min_speed_fraction must be in (0, 1]")


class PotentialFieldPolicy(Policy):
    """
    Steers along the resultant of an attraction toward the lookahead waypoint
    and ``k_rep / r**2`` repulsions away from each sensed opponent, and slows
    down as the nearest opponent gets closer than ``slow_radius``.
    """

    name = "potential_field"

    def __init__(
        self,
        gains: Optional[PotentialFieldGains] = None,
        sensor: Optional[SensorConfig] = None,
    ):
        super().__init__(sensor)
        self.gains = gains or PotentialFieldGains()

    def attraction(self, observation: Observation) -> np.ndarray:
        target = np.array(observation.lookahead)
        norm = float(np.hypot(*target))
        if norm == 0.0:
            return np.zeros(2)
        return self.gains.k_att * target / norm

    def repulsion(self, rng: float, bearing: float) -> np.ndarray:
        """Body-frame repulsive force of one opponent at range and bearing."""
        if rng == 0.0:
            return COINCIDENT_PUSH.copy()
        magnitude = self.gains.k_rep / rng**2
        if math.sin(bearing) == 0.0 and math.cos(bearing) > 0.0:
            # dead ahead: push left
            return np.array([0.0, magnitude])
        return -magnitude * np.array([math.cos(bearing), math.sin(bearing)])

    @staticmethod
    def locate(observation: Observation, contact: Contact) -> Tuple[float, float]:
        """Range and body-frame bearing of ``contact``."""
        own = observation.own_state
        dx = contact.position.x - own.position.x
        dy = contact.position.y - own.position.y
        rng = math.hypot(dx, dy)
        if rng == 0.0:
            return 0.0, 0.0
        return rng, wrap_angle(math.atan2(dy, dx) - own.heading)

    def force(self, observation: Observation) -> Tuple[np.ndarray, np.ndarray]:
        """Attraction and the repulsion summed over every sensed opponent."""
        attraction = self.attraction(observation)
        repulsion = np.zeros(2)
        for contact in observation.contacts:
            repulsion = repulsion + self.repulsion(*self.locate(observation, contact))
        return attraction, repulsion

    def act(self, observation: Observation) -> Action:
        attraction, repulsion = self.force(observation)
        total = attraction + repulsion
        angle = math.atan2(total[1], total[0]) if np.any(total) else 0.0

        nearest = min(
            (self.locate(observation, c)[0] for c in observation.contacts),
            default=math.inf,
        )
        fraction = min(
            max(nearest / self.gains.slow_radius, self.gains.min_speed_fraction), 1.0
        )
        regulated = speed_command(
            observation.speed, self.gains.target_speed * fraction, self.gains.speed_gain
        )
        return replace(
            regulated,
            steering_command=heading_to_command(angle, observation.own_spec.max_steering),
        )


def potential_field_policy(
    gains: Optional[PotentialFieldGains] = None, sensor: Optional[SensorConfig] = None
) -> PotentialFieldPolicy:
    return PotentialFieldPolicy(gains=gains, sensor=sensor)
