"""Episode loop coupling the simulator, scripted policies and an objective."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError
from advbench.policies.base import Policy
from advbench.policies.observation import SensorConfig, observe
from advbench.policies.pursuit import TrafficBot
from advbench.rewards import (
    EpisodeStatus,
    ObjectiveSpec,
    RewardRecord,
    TerminalReason,
    episode_status,
    reward_record,
)
from advbench.sim.collisions import CollisionEvent
from advbench.sim.trace import TraceFrame
from advbench.sim.track import Track, point_at
from advbench.sim.vehicle import Action, VehicleSpec, VehicleState
from advbench.sim.world import PhysicsConfig, WorldState, make_world, step

log = logging.getLogger(__name__)


@dataclass_json
@dataclass(frozen=True)
class ScenarioConfig:
    """Initial arrangement and episode limits."""

    step_limit: int = 200
    wreck_threshold: float = 500.0
    initial_speed: float = 5.0
    adversary_gap_min: float = 15.0
    adversary_gap_max: float = 40.0
    lateral_jitter: float = 0.25
    traffic_speed: float = 8.0
    traffic_lane_fraction: float = 0.5

    def __post_init__(self):
        if self.step_limit < 1:
            raise ConfigurationError("scenario.step_limit must be >= 1")
        if self.adversary_gap_min > self.adversary_gap_max:
            raise ConfigurationError("scenario adversary gap min exceeds max")
        if not 0 <= self.lateral_jitter < 1 or not 0 <= self.traffic_lane_fraction < 1:
            raise ConfigurationError("scenario lateral fractions must be in [0, 1)")


@dataclass
class StepResult:
    observation: np.ndarray
    record: RewardRecord
    status: EpisodeStatus
    world: WorldState


@dataclass
class EpisodeOutcome:
    episode_return: float
    steps: int
    reason: Optional[TerminalReason]
    frames: List[TraceFrame] = field(default_factory=list)
    events: List[CollisionEvent] = field(default_factory=list)

    def collided(self, vehicle_id: str) -> bool:
        return any(e.involves(vehicle_id) for e in self.events)

    @property
    def success(self) -> bool:
        return self.reason == TerminalReason.success


def traffic_id(index: int) -> str:
    return f"traffic_{index}"


class DrivingEnv:
    """
    One learner vehicle among scripted vehicles.

    The learner is ``objective.learner_id``: the adversary for adversarial
    objectives, the subject for track-driving ones. When the adversary learns,
    ``subject_policy`` drives the subject.
    """

    def __init__(
        self,
        track: Track,
        objective: ObjectiveSpec,
        subject_policy: Optional[Policy] = None,
        traffic_count: int = 0,
        scenario: Optional[ScenarioConfig] = None,
        physics: Optional[PhysicsConfig] = None,
        sensor: Optional[SensorConfig] = None,
        vehicle_spec: Optional[VehicleSpec] = None,
    ):
        if traffic_count < 0:
            raise ConfigurationError("traffic count must be >= 0")
        self.track = track
        self.objective = objective
        self.subject_policy = subject_policy
        self.traffic_count = traffic_count
        self.scenario = scenario or ScenarioConfig()
        self.physics = physics or PhysicsConfig()
        self.sensor = sensor or SensorConfig()
        self.vehicle_spec = vehicle_spec or VehicleSpec()
        self.learner_id = objective.learner_id
        if objective.kind.adversarial and subject_policy is None:
            raise ConfigurationError("adversarial objectives need a subject policy")
        self.scripted: Dict[str, Policy] = {}
        self.world: Optional[WorldState] = None
        self.episode = 0

    @property
    def observation_size(self) -> int:
        return self.sensor.vector_size

    def _spawn(self, arc: float, lateral: float, speed: float) -> VehicleState:
        position, heading = point_at(self.track, arc, lateral)
        return VehicleState(position=position, heading=heading, speed_longitudinal=speed)

    def reset(self, seed: int, episode: int = 0) -> np.ndarray:
        """Start an episode; the layout is a pure function of ``seed``."""
        rng = np.random.default_rng(seed)
        cfg = self.scenario
        half = self.track.half_width
        total = self.track.total_length
        start = float(rng.uniform(0.0, total))

        vehicles = [
            (
                self.objective.target_id,
                self._spawn(
                    start,
                    float(rng.uniform(-cfg.lateral_jitter, cfg.lateral_jitter)) * half,
                    cfg.initial_speed,
                ),
                self.vehicle_spec,
            )
        ]
        self.scripted = {}
        if self.objective.kind.adversarial:
            gap = float(rng.uniform(cfg.adversary_gap_min, cfg.adversary_gap_max))
            vehicles.append(
                (
                    self.objective.adversary_id,
                    self._spawn(
                        start + gap,
                        float(rng.uniform(-cfg.lateral_jitter, cfg.lateral_jitter)) * half,
                        cfg.initial_speed,
                    ),
                    self.vehicle_spec,
                )
            )
            self.scripted[self.objective.target_id] = self.subject_policy

        spacing = total / (self.traffic_count + 1)
        lanes = (-cfg.traffic_lane_fraction, 0.0, cfg.traffic_lane_fraction)
        for k in range(self.traffic_count):
            lane = lanes[int(rng.integers(len(lanes)))] * half
            speed = cfg.traffic_speed * float(rng.uniform(0.6, 1.0))
            vehicle_id = traffic_id(k)
            vehicles.append(
                (
                    vehicle_id,
                    self._spawn(start + (k + 1) * spacing, lane, min(speed, cfg.initial_speed)),
                    self.vehicle_spec,
                )
            )
            self.scripted[vehicle_id] = TrafficBot(
                target_speed=speed, lateral_offset=lane, sensor=self.sensor
            )

        for policy in self.scripted.values():
            policy.reset()
        self.world = make_world(self.track, vehicles, seed=seed, physics=self.physics)
        self.episode = episode
        log.trace(f"reset episode {episode} seed {seed}")
        return observe(self.world, self.learner_id, self.sensor).to_vector()

    def scripted_actions(self) -> Dict[str, Action]:
        # every observation is taken before the world advances
        observations = {
            vehicle_id: policy.observe(self.world, vehicle_id)
            for vehicle_id, policy in self.scripted.items()
        }
        return {
            vehicle_id: self.scripted[vehicle_id].act(obs)
            for vehicle_id, obs in observations.items()
        }

    def step(self, action: Action) -> StepResult:
        if self.world is None:
            raise ConfigurationError("reset the environment before stepping")
        actions = self.scripted_actions()
        actions[self.learner_id] = action
        self.world = step(self.world, actions, self.physics.dt)
        record = reward_record(self.world, self.objective)
        status = episode_status(
            self.world,
            self.objective,
            self.scenario.step_limit,
            self.scenario.wreck_threshold,
        )
        observation = observe(self.world, self.learner_id, self.sensor).to_vector()
        return StepResult(observation, record, status, self.world)

    def frame(self) -> TraceFrame:
        return TraceFrame.from_world(self.world, episode=self.episode)


def run_episode(
    env: DrivingEnv,
    policy: Policy,
    seed: int,
    episode: int = 0,
    record_frames: bool = True,
) -> EpisodeOutcome:
    """Drive the learner slot with ``policy`` until the episode ends."""
    env.reset(seed, episode)
    policy.reset()
    frames = [env.frame()] if record_frames else []
    events: List[CollisionEvent] = []
    total = 0.0
    steps = 0
    while True:
        action = policy.act(policy.observe(env.world, env.learner_id))
        result = env.step(action)
        total += result.record.value
        steps += 1
        events.extend(result.world.collisions_this_step)
        if record_frames:
            frames.append(env.frame())
        if result.status.terminal:
            return EpisodeOutcome(total, steps, result.status.reason, frames, events)
