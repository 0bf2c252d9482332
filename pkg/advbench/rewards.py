"""Reward functions and episode termination."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError
from advbench.sim.collisions import CollisionEvent
from advbench.sim.geometry import Vec2
from advbench.sim.track import TrackFrame, track_frame
from advbench.sim.world import DEFAULT_DT, WorldState, distance

log = logging.getLogger(__name__)

DEFAULT_COLLISION_COST = 200.0
DEFAULT_ADVERSARY_COST = 100.0


class ObjectiveKind(str, Enum):
    """Reward configurations."""

    track_driving = "track_driving"
    track_driving_with_collision = "track_driving_with_collision"
    direct_collision = "direct_collision"
    induced_collision = "induced_collision"
    trajectory_manipulation = "trajectory_manipulation"

    @property
    def adversarial(self) -> bool:
        return self in (
            ObjectiveKind.direct_collision,
            ObjectiveKind.induced_collision,
            ObjectiveKind.trajectory_manipulation,
        )

    @property
    def label(self) -> str:
        return {
            ObjectiveKind.track_driving: "track driving",
            ObjectiveKind.track_driving_with_collision: "track driving",
            ObjectiveKind.direct_collision: "direct collisions",
            ObjectiveKind.induced_collision: "induced collisions",
            ObjectiveKind.trajectory_manipulation: "trajectory manipulation",
        }[self]


class TerminalReason(str, Enum):
    success = "success"
    timeout = "timeout"
    wrecked = "wrecked"


@dataclass_json
@dataclass(frozen=True)
class ObjectiveSpec:
    """
    Objective with its constants.

    For the track-driving kinds ``target_id`` is the vehicle being driven; for
    the adversarial kinds it is the vehicle under test and ``adversary_id`` the
    learner.
    """

    kind: ObjectiveKind = ObjectiveKind.direct_collision
    c: float = DEFAULT_COLLISION_COST
    c_prime: float = DEFAULT_COLLISION_COST
    c_t: float = DEFAULT_COLLISION_COST
    c_adv: float = DEFAULT_ADVERSARY_COST
    reference_trajectory: Optional[Tuple[Vec2, ...]] = None
    reference_dt: float = DEFAULT_DT
    target_id: str = "subject"
    adversary_id: str = "adversary"
    absolute_sin: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", ObjectiveKind(self.kind))
        if self.reference_trajectory is not None:
            object.__setattr__(
                self, "reference_trajectory", tuple(self.reference_trajectory)
            )
        used = {
            ObjectiveKind.track_driving: (),
            ObjectiveKind.track_driving_with_collision: ("c",),
            ObjectiveKind.direct_collision: ("c_prime",),
            ObjectiveKind.induced_collision: ("c_t", "c_adv"),
            ObjectiveKind.trajectory_manipulation: (),
        }[self.kind]
        for name in used:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"objective.{name} must be > 0, got {value}")
        has_reference = bool(self.reference_trajectory)
        if has_reference != (self.kind == ObjectiveKind.trajectory_manipulation):
            raise ConfigurationError(
                "reference_trajectory is required for, and only for, trajectory_manipulation"
            )
        if self.reference_dt <= 0:
            raise ConfigurationError("objective.reference_dt must be > 0")
        if self.kind.adversarial and self.target_id == self.adversary_id:
            raise ConfigurationError("target and adversary must differ")

    @property
    def learner_id(self) -> str:
        return self.adversary_id if self.kind.adversarial else self.target_id

    @property
    def c_max(self) -> float:
        return max(self.c, self.c_prime, self.c_t, self.c_adv)


@dataclass_json
@dataclass(frozen=True)
class RewardRecord:
    """One step's reward with its additive breakdown."""

    step_index: int
    value: float
    components: Dict[str, float] = field(default_factory=dict)
    clamped: bool = False

    @classmethod
    def from_components(
        cls, step_index: int, components: Dict[str, float], clamped: bool = False
    ) -> "RewardRecord":
        value = 0.0
        for term in components.values():
            value += term
        return cls(step_index, value, dict(components), clamped)


@dataclass(frozen=True)
class EpisodeStatus:
    terminal: bool
    reason: Optional[TerminalReason] = None

    @classmethod
    def running(cls) -> "EpisodeStatus":
        return cls(False, None)


def _track_components(
    frame: TrackFrame, speed: float, absolute_sin: bool = False
) -> Dict[str, float]:
    sin_term = math.sin(frame.angle_to_axis)
    if absolute_sin:
        sin_term = abs(sin_term)
    return {
        "progress": speed * math.cos(frame.angle_to_axis),
        "heading": -speed * sin_term,
        "offset": -speed * abs(frame.lateral_offset),
    }


def reward_track(frame: TrackFrame, speed: float, absolute_sin: bool = False) -> float:
    """``V cos(theta) - V sin(theta) - V |d|``, with an optional ``|sin|`` variant."""
    return RewardRecord.from_components(0, _track_components(frame, speed, absolute_sin)).value


def reward_track_collision(
    frame: TrackFrame,
    speed: float,
    collided: bool,
    c: float = DEFAULT_COLLISION_COST,
    absolute_sin: bool = False,
) -> float:
    """Track reward minus ``c`` on a collision step."""
    if c <= 0:
        raise ConfigurationError(f"collision cost must be > 0, got {c}")
    return reward_track(frame, speed, absolute_sin) - (c if collided else 0.0)


def _events(world: WorldState) -> Tuple[CollisionEvent, ...]:
    return world.collisions_this_step


def target_hit_adversary(world: WorldState, spec: ObjectiveSpec) -> bool:
    return any(e.between(spec.target_id, spec.adversary_id) for e in _events(world))


def target_hit_other(world: WorldState, spec: ObjectiveSpec) -> bool:
    return any(
        e.involves(spec.target_id) and e.other(spec.target_id) != spec.adversary_id
        for e in _events(world)
    )


def adversary_collided(world: WorldState, spec: ObjectiveSpec) -> bool:
    return any(e.involves(spec.adversary_id) for e in _events(world))


def vehicle_collided(world: WorldState, vehicle_id: str) -> bool:
    return any(e.involves(vehicle_id) for e in _events(world))


def reference_position(spec: ObjectiveSpec, t: float) -> Tuple[Vec2, bool]:
    """Nearest reference sample in time, clamped at the ends; flag set when clamped."""
    samples = spec.reference_trajectory
    last = len(samples) - 1
    index = int(round(t / spec.reference_dt))
    clamped = index > last or index < 0
    return samples[min(max(index, 0), last)], clamped


def reward_record(
    world: WorldState, spec: ObjectiveSpec, t: Optional[float] = None
) -> RewardRecord:
    """
    Reward of the current step for the spec's learner.

    Parameters
    ----------
    world : WorldState
        World after the step; its collision ledger drives the indicators
    spec : ObjectiveSpec
        Objective
    t : Optional[float]
        Reference lookup time for trajectory manipulation, defaults to the world's time

    Returns
    -------
    RewardRecord
        Value and labeled components
    """
    kind = spec.kind
    step_index = world.step_index
    clamped = False

    if kind in (ObjectiveKind.track_driving, ObjectiveKind.track_driving_with_collision):
        state = world.state(spec.target_id)
        frame = track_frame(world.track, state.position, state.heading)
        components = _track_components(frame, state.speed_longitudinal, spec.absolute_sin)
        if kind == ObjectiveKind.track_driving_with_collision:
            components["collision"] = (
                -spec.c if vehicle_collided(world, spec.target_id) else 0.0
            )
    elif kind == ObjectiveKind.direct_collision:
        eta = 1.0 if target_hit_adversary(world, spec) else 0.0
        components = {
            "collision": eta * spec.c_prime,
            "distance": -distance(spec.target_id, spec.adversary_id, world),
        }
    elif kind == ObjectiveKind.induced_collision:
        eta_t = 1.0 if target_hit_other(world, spec) else 0.0
        eta_adv = 1.0 if adversary_collided(world, spec) else 0.0
        components = {
            "target_collision": eta_t * spec.c_t,
            "distance": -distance(spec.target_id, spec.adversary_id, world),
            "adversary_collision": -eta_adv * spec.c_adv,
        }
    else:
        lookup = world.sim_time if t is None else t
        reference, clamped = reference_position(spec, lookup)
        target = world.state(spec.target_id).position
        components = {
            "distance": -distance(spec.target_id, spec.adversary_id, world),
            "trajectory": -(target - reference).norm(),
        }
        if clamped:
            log.debug(f"reference trajectory clamped at t={lookup}")

    return RewardRecord.from_components(step_index, components, clamped)


def reward_direct_collision(world: WorldState, spec: ObjectiveSpec) -> float:
    _require(spec, ObjectiveKind.direct_collision)
    return reward_record(world, spec).value


def reward_induced_collision(world: WorldState, spec: ObjectiveSpec) -> float:
    _require(spec, ObjectiveKind.induced_collision)
    return reward_record(world, spec).value


def reward_trajectory_manipulation(
    world: WorldState, spec: ObjectiveSpec, t: Optional[float] = None
) -> float:
    """Trajectory reward at time ``t`` (defaults to the world's time)."""
    _require(spec, ObjectiveKind.trajectory_manipulation)
    return reward_record(world, spec, t).value


def _require(spec: ObjectiveSpec, kind: ObjectiveKind):
    if spec.kind != kind:
        raise ConfigurationError(f"expected a {kind.value} objective, got {spec.kind.value}")


def success_event(
    event: CollisionEvent, kind: ObjectiveKind, target_id: str, adversary_id: str
) -> bool:
    """Whether ``event`` completes an objective of ``kind``."""
    if kind == ObjectiveKind.direct_collision:
        return event.between(target_id, adversary_id)
    if kind == ObjectiveKind.induced_collision:
        return event.involves(target_id) and event.other(target_id) != adversary_id
    return False


def objective_success(world: WorldState, spec: ObjectiveSpec) -> bool:
    """Success event of the objective on this step."""
    return any(
        success_event(e, spec.kind, spec.target_id, spec.adversary_id)
        for e in _events(world)
    )


def episode_status(
    world: WorldState,
    spec: ObjectiveSpec,
    step_limit: int,
    wreck_threshold: float = math.inf,
) -> EpisodeStatus:
    """Terminal on objective success, on any vehicle wrecked, or at the step limit."""
    if objective_success(world, spec):
        return EpisodeStatus(True, TerminalReason.success)
    if any(e.state.damage > wreck_threshold for e in world.vehicles.values()):
        return EpisodeStatus(True, TerminalReason.wrecked)
    if world.step_index >= step_limit:
        return EpisodeStatus(True, TerminalReason.timeout)
    return EpisodeStatus.running()
