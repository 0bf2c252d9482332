"""Sensor model: what a policy may see of the world at the current step."""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError
from advbench.sim.geometry import Vec2, rotate_to_frame, wrap_angle
from advbench.sim.track import Track, TrackFrame, point_at, track_frame
from advbench.sim.vehicle import VehicleSpec, VehicleState
from advbench.sim.world import WorldState

OWN_FEATURES = 4


@dataclass_json
@dataclass(frozen=True)
class SensorConfig:
    """Range sensor and lookahead settings."""

    sectors: int = 8
    sensing_radius: float = 50.0
    lookahead: float = 10.0

    def __post_init__(self):
        if self.sectors < 1:
            raise ConfigurationError("sensor.sectors must be >= 1")
        if self.sensing_radius <= 0 or self.lookahead <= 0:
            raise ConfigurationError("sensor radius and lookahead must be > 0")

    @property
    def sector_width(self) -> float:
        return 2.0 * math.pi / self.sectors

    @property
    def vector_size(self) -> int:
        return OWN_FEATURES + 3 * self.sectors


@dataclass(frozen=True)
class Contact:
    """Another vehicle as sensed this step."""

    position: Vec2
    heading: float
    speed: float
    half_length: float
    half_width: float


@dataclass(frozen=True)
class Observation:
    """
    Per-vehicle observation.

    Sector ``k`` is centered on bearing ``k * 2pi / sectors`` relative to the
    vehicle heading (sector 0 dead ahead, counter-clockwise). Empty sectors
    report the sensing radius, zero closing speed and the sector-center bearing.
    """

    frame: TrackFrame
    speed: float
    ranges: Tuple[float, ...]
    closing_speeds: Tuple[float, ...]
    bearings: Tuple[float, ...]
    occupied: Tuple[bool, ...]
    own_state: VehicleState
    own_spec: VehicleSpec
    contacts: Tuple[Contact, ...]
    lookahead: Tuple[float, float]
    track: Track
    sensor: SensorConfig

    def to_vector(self) -> np.ndarray:
        """Normalized numeric feature vector for networks."""
        sensor = self.sensor
        half_sector = 0.5 * sensor.sector_width
        centers = np.arange(sensor.sectors) * sensor.sector_width
        offsets = np.array(
            [wrap_angle(b - c) for b, c in zip(self.bearings, centers)]
        ) / half_sector
        own = [
            self.frame.angle_to_axis / math.pi,
            self.frame.lateral_offset / self.track.half_width,
            self.speed / self.own_spec.max_speed,
            self.own_state.steering_angle / self.own_spec.max_steering,
        ]
        return np.concatenate(
            [
                np.array(own),
                np.array(self.ranges) / sensor.sensing_radius,
                np.array(self.closing_speeds) / (2.0 * self.own_spec.max_speed),
                offsets,
            ]
        )


def observe(world: WorldState, own_id: str, sensor: SensorConfig) -> Observation:
    """
    Build the observation of ``own_id`` from the current world only.

    Parameters
    ----------
    world : WorldState
        Current world
    own_id : str
        Observing vehicle
    sensor : SensorConfig
        Sensor settings

    Returns
    -------
    Observation
        Observation of the current step
    """
    own = world.entry(own_id)
    state = own.state
    width = sensor.sector_width
    ranges = [sensor.sensing_radius] * sensor.sectors
    closing = [0.0] * sensor.sectors
    filled = [False] * sensor.sectors
    bearings = [wrap_angle(k * width) for k in range(sensor.sectors)]
    contacts = []
    own_velocity = state.velocity

    for vehicle_id, entry in world.vehicles.items():
        if vehicle_id == own_id:
            continue
        other = entry.state
        dx = other.position.x - state.position.x
        dy = other.position.y - state.position.y
        rng = math.hypot(dx, dy)
        if rng > sensor.sensing_radius:
            continue
        contacts.append(
            Contact(
                position=other.position,
                heading=other.heading,
                speed=other.speed_longitudinal,
                half_length=entry.spec.half_length,
                half_width=entry.spec.half_width,
            )
        )
        bearing = math.atan2(dy, dx) - state.heading if rng > 0 else 0.0
        bearing = wrap_angle(bearing)
        sector = int(round(bearing / width)) % sensor.sectors
        if not filled[sector] or rng < ranges[sector]:
            relative = other.velocity - own_velocity
            filled[sector] = True
            ranges[sector] = rng
            bearings[sector] = bearing
            closing[sector] = (
                -float(relative[0] * dx + relative[1] * dy) / rng if rng > 0 else 0.0
            )

    frame = track_frame(world.track, state.position, state.heading)
    target, _ = point_at(world.track, frame.arc_progress + sensor.lookahead)
    lookahead = rotate_to_frame(
        target.x - state.position.x, target.y - state.position.y, state.heading
    )

    return Observation(
        frame=frame,
        speed=state.speed_longitudinal,
        ranges=tuple(ranges),
        closing_speeds=tuple(closing),
        bearings=tuple(bearings),
        occupied=tuple(filled),
        own_state=state,
        own_spec=own.spec,
        contacts=tuple(contacts),
        lookahead=lookahead,
        track=world.track,
        sensor=sensor,
    )
