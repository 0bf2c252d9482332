"""Deterministic 2D multi-vehicle simulator."""

from advbench.sim.collisions import BOUNDARY_ID, CollisionEvent, detect_collisions
from advbench.sim.geometry import Vec2, wrap_angle
from advbench.sim.track import Track, TrackFrame, load_track, track_frame
from advbench.sim.vehicle import Action, VehicleSpec, VehicleState, advance_vehicle
from advbench.sim.world import (
    PhysicsConfig,
    WorldState,
    distance,
    make_world,
    step,
)

__all__ = [
    "Action",
    "BOUNDARY_ID",
    "CollisionEvent",
    "PhysicsConfig",
    "Track",
    "TrackFrame",
    "Vec2",
    "VehicleSpec",
    "VehicleState",
    "WorldState",
    "advance_vehicle",
    "detect_collisions",
    "distance",
    "load_track",
    "make_world",
    "step",
    "track_frame",
    "wrap_angle",
]
