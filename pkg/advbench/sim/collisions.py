"""Footprint overlap tests and collision events."""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, List

import numpy as np
from dataclasses_json import dataclass_json

from advbench.sim.geometry import Vec2, footprint_corners
from advbench.sim.track import Track, track_frame

if TYPE_CHECKING:  # pragma: no cover
    from advbench.sim.world import WorldState

BOUNDARY_ID = "boundary"


@dataclass_json
@dataclass(frozen=True)
class CollisionEvent:
    """Contact between two vehicles, or a vehicle and the track boundary."""

    step_index: int
    vehicle_a: str
    vehicle_b: str
    relative_speed: float

    def involves(self, vehicle_id: str) -> bool:
        return vehicle_id in (self.vehicle_a, self.vehicle_b)

    def between(self, first: str, second: str) -> bool:
        return {self.vehicle_a, self.vehicle_b} == {first, second}

    def other(self, vehicle_id: str) -> str:
        return self.vehicle_b if self.vehicle_a == vehicle_id else self.vehicle_a


def _axes(corners: np.ndarray) -> np.ndarray:
    edges = np.roll(corners, -1, axis=0)[:2] - corners[:2]
    return np.stack([-edges[:, 1], edges[:, 0]], axis=1)


def footprints_overlap(corners_a: np.ndarray, corners_b: np.ndarray) -> bool:
    """
    Separating axis test for two oriented rectangles.

    Touching footprints do not overlap.
    """
    for axis in np.concatenate([_axes(corners_a), _axes(corners_b)]):
        proj_a = corners_a @ axis
        proj_b = corners_b @ axis
        if proj_a.max() <= proj_b.min() or proj_b.max() <= proj_a.min():
            return False
    return True


def outside_track(corners: np.ndarray, track: Track) -> bool:
    """True when any corner leaves the drivable band."""
    return any(
        abs(track_frame(track, Vec2(float(x), float(y)), 0.0).lateral_offset)
        > track.half_width
        for x, y in corners
    )


def detect_collisions(world: "WorldState") -> List[CollisionEvent]:
    """
    Detect vehicle pairs with overlapping footprints and vehicles leaving the track.

    Parameters
    ----------
    world : WorldState
        World after integration

    Returns
    -------
    List[CollisionEvent]
        One event per colliding unordered pair (world order), then one boundary
        event per vehicle outside the drivable band
    """
    entries = list(world.vehicles.values())
    corners = [
        footprint_corners(
            e.state.position.x,
            e.state.position.y,
            e.state.heading,
            e.spec.half_length,
            e.spec.half_width,
        )
        for e in entries
    ]
    events = []
    for i, first in enumerate(entries):
        for j in range(i + 1, len(entries)):
            second = entries[j]
            if footprints_overlap(corners[i], corners[j]):
                relative = first.state.velocity - second.state.velocity
                events.append(
                    CollisionEvent(
                        step_index=world.step_index,
                        vehicle_a=first.vehicle_id,
                        vehicle_b=second.vehicle_id,
                        relative_speed=float(math.hypot(relative[0], relative[1])),
                    )
                )
    for entry, entry_corners in zip(entries, corners):
        if outside_track(entry_corners, world.track):
            events.append(
                CollisionEvent(
                    step_index=world.step_index,
                    vehicle_a=entry.vehicle_id,
                    vehicle_b=BOUNDARY_ID,
                    relative_speed=float(entry.state.speed_longitudinal),
                )
            )
    return events
