"""Vehicle types and kinematic bicycle integration."""

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError, RejectedInputError
from advbench.sim.geometry import Vec2, wrap_angle

ACTION_DIM = 3
ACTION_LOW = np.array([0.0, 0.0, -1.0])
ACTION_HIGH = np.array([1.0, 1.0, 1.0])


@dataclass_json
@dataclass(frozen=True)
class VehicleSpec:
    """Vehicle footprint and actuation limits."""

    half_length: float = 2.0
    half_width: float = 1.0
    max_speed: float = 30.0
    max_accel: float = 4.0
    max_brake_decel: float = 8.0
    max_steering: float = 0.6
    max_steering_rate: float = 1.5

    def __post_init__(self):
        for name in (
            "half_length",
            "half_width",
            "max_speed",
            "max_accel",
            "max_brake_decel",
            "max_steering",
            "max_steering_rate",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"VehicleSpec.{name} must be > 0, got {value}")
        if self.max_brake_decel < self.max_accel:
            raise ConfigurationError("VehicleSpec.max_brake_decel must be >= max_accel")

    @property
    def wheelbase(self) -> float:
        return 2.0 * self.half_length


@dataclass_json
@dataclass(frozen=True)
class VehicleState:
    """Kinematic state of one vehicle."""

    position: Vec2
    heading: float = 0.0
    speed_longitudinal: float = 0.0
    steering_angle: float = 0.0
    damage: float = 0.0

    @property
    def velocity(self) -> np.ndarray:
        return self.speed_longitudinal * np.array(
            [math.cos(self.heading), math.sin(self.heading)]
        )


def _clamp(value: float, low: float, high: float) -> float:
    return min(max(value, low), high)


@dataclass(frozen=True)
class Action:
    """Throttle, brake and steering command, clamped to range on construction."""

    throttle: float = 0.0
    brake: float = 0.0
    steering_command: float = 0.0

    def __post_init__(self):
        values = (self.throttle, self.brake, self.steering_command)
        if any(math.isnan(v) for v in values):
            raise RejectedInputError(f"NaN in action {values}")
        object.__setattr__(self, "throttle", _clamp(float(self.throttle), 0.0, 1.0))
        object.__setattr__(self, "brake", _clamp(float(self.brake), 0.0, 1.0))
        object.__setattr__(
            self, "steering_command", _clamp(float(self.steering_command), -1.0, 1.0)
        )

    def to_array(self) -> np.ndarray:
        return np.array([self.throttle, self.brake, self.steering_command])

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Action":
        if len(values) != ACTION_DIM:
            raise RejectedInputError(f"action vector must have {ACTION_DIM} entries")
        return cls(float(values[0]), float(values[1]), float(values[2]))


def advance_vehicle(
    state: VehicleState, spec: VehicleSpec, action: Action, dt: float
) -> VehicleState:
    """
    Advance one vehicle by one kinematic bicycle step.

    Steering slews toward the command at the rate limit, speed integrates the
    throttle/brake acceleration, and the pose follows the constant-curvature arc
    for the step using the mean of the old and new speeds.

    Parameters
    ----------
    state : VehicleState
        State at the start of the step
    spec : VehicleSpec
        Vehicle limits
    action : Action
        Command held over the step
    dt : float
        Step length in seconds

    Returns
    -------
    VehicleState
        State at the end of the step (damage unchanged)
    """
    target = action.steering_command * spec.max_steering
    max_delta = spec.max_steering_rate * dt
    steering = state.steering_angle + _clamp(
        target - state.steering_angle, -max_delta, max_delta
    )
    steering = _clamp(steering, -spec.max_steering, spec.max_steering)

    accel = action.throttle * spec.max_accel - action.brake * spec.max_brake_decel
    speed = _clamp(state.speed_longitudinal + accel * dt, 0.0, spec.max_speed)

    travelled = 0.5 * (state.speed_longitudinal + speed) * dt
    turn = travelled * math.tan(steering) / spec.wheelbase
    heading = state.heading
    x, y = state.position.x, state.position.y
    if abs(turn) > 1e-12:
        radius = travelled / turn
        x += radius * (math.sin(heading + turn) - math.sin(heading))
        y += radius * (math.cos(heading) - math.cos(heading + turn))
    else:
        x += travelled * math.cos(heading)
        y += travelled * math.sin(heading)

    return replace(
        state,
        position=Vec2(x, y),
        heading=wrap_angle(heading + turn),
        speed_longitudinal=speed,
        steering_angle=steering,
    )
