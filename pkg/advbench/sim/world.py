"""Deterministic fixed-timestep multi-vehicle world."""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

from dataclasses_json import dataclass_json

from advbench.core.errors import (
    ConfigurationError,
    RejectedInputError,
    UnknownVehicleError,
)
from advbench.sim.collisions import BOUNDARY_ID, CollisionEvent, detect_collisions
from advbench.sim.track import Track
from advbench.sim.vehicle import Action, VehicleSpec, VehicleState, advance_vehicle

log = logging.getLogger(__name__)

DEFAULT_DT = 0.05


@dataclass_json
@dataclass(frozen=True)
class PhysicsConfig:
    """Simulation constants shared by every step of a world."""

    dt: float = DEFAULT_DT
    damage_coefficient: float = 1.0
    boundary_damage: float = 1.0
    distance_metric: str = "euclidean"

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"dt must be > 0, got {self.dt}")
        if self.damage_coefficient < 0 or self.boundary_damage < 0:
            raise ConfigurationError("damage constants must be non-negative")
        if self.distance_metric not in DISTANCE_METRICS:
            raise ConfigurationError(
                f"unknown distance metric {self.distance_metric!r}, "
                f"expected one of {sorted(DISTANCE_METRICS)}"
            )


@dataclass(frozen=True)
class VehicleEntry:
    """A vehicle id with its state and spec."""

    vehicle_id: str
    state: VehicleState
    spec: VehicleSpec


@dataclass(frozen=True)
class WorldState:
    """Immutable snapshot of the simulator."""

    sim_time: float
    step_index: int
    vehicles: Mapping[str, VehicleEntry]
    track: Track
    collisions_this_step: Tuple[CollisionEvent, ...] = ()
    rng_seed: int = 0
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)

    def entry(self, vehicle_id: str) -> VehicleEntry:
        try:
            return self.vehicles[vehicle_id]
        except KeyError:
            raise UnknownVehicleError(f"unknown vehicle {vehicle_id!r}") from None

    def state(self, vehicle_id: str) -> VehicleState:
        return self.entry(vehicle_id).state

    @property
    def vehicle_ids(self) -> Tuple[str, ...]:
        return tuple(self.vehicles)


def make_world(
    track: Track,
    vehicles: Sequence[Tuple[str, VehicleState, VehicleSpec]],
    seed: int = 0,
    physics: Optional[PhysicsConfig] = None,
) -> WorldState:
    """Build the step-0 world; vehicle order is the order given."""
    entries: Dict[str, VehicleEntry] = {}
    for vehicle_id, state, spec in vehicles:
        if vehicle_id in entries or vehicle_id == BOUNDARY_ID:
            raise ConfigurationError(f"duplicate or reserved vehicle id {vehicle_id!r}")
        entries[vehicle_id] = VehicleEntry(vehicle_id, state, spec)
    return WorldState(
        sim_time=0.0,
        step_index=0,
        vehicles=entries,
        track=track,
        rng_seed=seed,
        physics=physics or PhysicsConfig(),
    )


def step(world: WorldState, actions: Mapping[str, Action], dt: float) -> WorldState:
    """
    Advance every vehicle one step, detect collisions and accrue damage.

    Parameters
    ----------
    world : WorldState
        Current world
    actions : Mapping[str, Action]
        One action per vehicle id
    dt : float
        Must equal the world's configured timestep

    Returns
    -------
    WorldState
        Next world; ``collisions_this_step`` holds the events of this step

    Raises
    ------
    ConfigurationError
        Wrong dt or a vehicle without an action
    RejectedInputError
        Non-finite action component
    """
    if not dt > 0 or dt != world.physics.dt:
        raise ConfigurationError(f"dt {dt} does not match configured {world.physics.dt}")

    advanced: Dict[str, VehicleEntry] = {}
    for vehicle_id, entry in world.vehicles.items():
        if vehicle_id not in actions:
            raise ConfigurationError(f"missing action for vehicle {vehicle_id!r}")
        action = actions[vehicle_id]
        if not all(math.isfinite(v) for v in action.to_array()):
            raise RejectedInputError(f"non-finite action for vehicle {vehicle_id!r}")
        advanced[vehicle_id] = replace(
            entry, state=advance_vehicle(entry.state, entry.spec, action, dt)
        )

    step_index = world.step_index + 1
    moved = replace(
        world,
        step_index=step_index,
        sim_time=step_index * dt,
        vehicles=advanced,
        collisions_this_step=(),
    )
    events = detect_collisions(moved)

    damage = {vehicle_id: 0.0 for vehicle_id in advanced}
    for event in events:
        if event.vehicle_b == BOUNDARY_ID:
            damage[event.vehicle_a] += world.physics.boundary_damage
        else:
            contribution = event.relative_speed * world.physics.damage_coefficient
            damage[event.vehicle_a] += contribution
            damage[event.vehicle_b] += contribution

    damaged = {
        vehicle_id: replace(
            entry, state=replace(entry.state, damage=entry.state.damage + damage[vehicle_id])
        )
        if damage[vehicle_id]
        else entry
        for vehicle_id, entry in advanced.items()
    }
    for event in events:
        log.debug(f"step {step_index}: collision {event}")

    return replace(moved, vehicles=damaged, collisions_this_step=tuple(events))


def euclidean_distance(first: VehicleState, second: VehicleState) -> float:
    return math.hypot(
        first.position.x - second.position.x, first.position.y - second.position.y
    )


DISTANCE_METRICS: Dict[str, Callable[[VehicleState, VehicleState], float]] = {
    "euclidean": euclidean_distance,
}


def distance(a: str, b: str, world: WorldState) -> float:
    """Distance between two vehicles under the world's configured metric."""
    metric = DISTANCE_METRICS[world.physics.distance_metric]
    return metric(world.state(a), world.state(b))
