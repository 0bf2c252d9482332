"""Sampling-based receding horizon controller."""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError
from advbench.policies.base import Policy
from advbench.policies.observation import Contact, Observation, SensorConfig
from advbench.sim.collisions import footprints_overlap, outside_track
from advbench.sim.geometry import footprint_corners
from advbench.sim.track import track_frame, unwrap_progress
from advbench.sim.vehicle import Action, advance_vehicle
from advbench.sim.world import DEFAULT_DT

log = logging.getLogger(__name__)


@dataclass_json
@dataclass(frozen=True)
class RecedingHorizonConfig:
    horizon: int = 20
    candidates: int = 9
    dt: float = DEFAULT_DT
    collision_penalty: float = 1e6
    offtrack_penalty: float = 1e3

    def __post_init__(self):
        if self.horizon < 1:
            raise ConfigurationError("receding horizon needs horizon >= 1")
        if self.candidates < 2:
            raise ConfigurationError("receding horizon needs candidates >= 2")
        if self.dt <= 0:
            raise ConfigurationError("receding horizon dt must be > 0")


@dataclass(frozen=True)
class RolloutScore:
    progress: float
    collided: bool
    offtrack_steps: int
    score: float


def steering_grid(count: int) -> List[float]:
    """``count`` steering commands: 0, then alternating +/- magnitudes up to 1."""
    if count <= 1:
        return [0.0]
    sides = count // 2
    grid = [0.0]
    for level in range(1, sides + 1):
        magnitude = level / sides
        for sign in (1.0, -1.0):
            if len(grid) < count:
                grid.append(sign * magnitude)
    return grid


def candidate_actions(count: int) -> List[Action]:
    """Full-throttle candidates over a steering grid, then full-brake ones."""
    grid = steering_grid(math.ceil(count / 2))
    actions = [Action(throttle=1.0, steering_command=s) for s in grid]
    actions += [Action(brake=1.0, steering_command=s) for s in grid]
    return actions[:count]


def predict_contact(contact: Contact, elapsed: float) -> np.ndarray:
    """Constant-velocity prediction of a contact's footprint."""
    travelled = contact.speed * elapsed
    return footprint_corners(
        contact.position.x + travelled * math.cos(contact.heading),
        contact.position.y + travelled * math.sin(contact.heading),
        contact.heading,
        contact.half_length,
        contact.half_width,
    )


class RecedingHorizonPolicy(Policy):
    """
    Rolls out each constant-action candidate for ``horizon`` steps and applies
    the best one; ties go to the lowest candidate index.
    """

    name = "receding_horizon"

    def __init__(
        self,
        config: Optional[RecedingHorizonConfig] = None,
        sensor: Optional[SensorConfig] = None,
    ):
        super().__init__(sensor)
        self.config = config or RecedingHorizonConfig()
        self.candidates = candidate_actions(self.config.candidates)
        self.last_scores: Tuple[RolloutScore, ...] = ()
        self.last_choice: Optional[int] = None

    def reset(self):
        self.last_scores = ()
        self.last_choice = None

    def rollout(self, observation: Observation, action: Action) -> RolloutScore:
        """Score one candidate held constant over the horizon."""
        cfg = self.config
        state = observation.own_state
        spec = observation.own_spec
        collided = False
        offtrack = 0
        for k in range(1, cfg.horizon + 1):
            state = advance_vehicle(state, spec, action, cfg.dt)
            corners = footprint_corners(
                state.position.x,
                state.position.y,
                state.heading,
                spec.half_length,
                spec.half_width,
            )
            if not collided:
                collided = any(
                    footprints_overlap(corners, predict_contact(c, k * cfg.dt))
                    for c in observation.contacts
                )
            if outside_track(corners, observation.track):
                offtrack += 1

        end = track_frame(observation.track, state.position, state.heading)
        progress = unwrap_progress(
            observation.frame.arc_progress,
            end.arc_progress,
            observation.track.total_length,
        )
        score = (
            progress
            - (cfg.collision_penalty if collided else 0.0)
            - cfg.offtrack_penalty * offtrack
        )
        return RolloutScore(progress, collided, offtrack, score)

    def act(self, observation: Observation) -> Action:
        scores = tuple(self.rollout(observation, a) for a in self.candidates)
        best = 0
        for idx, result in enumerate(scores):
            if result.score > scores[best].score:
                best = idx
        self.last_scores = scores
        self.last_choice = best
        log.trace(f"receding horizon picked candidate {best} score {scores[best].score}")
        return self.candidates[best]


def receding_horizon_policy(
    horizon: int = 20,
    candidates: int = 9,
    dt: float = DEFAULT_DT,
    sensor: Optional[SensorConfig] = None,
) -> RecedingHorizonPolicy:
    return RecedingHorizonPolicy(
        RecedingHorizonConfig(horizon=horizon, candidates=candidates, dt=dt), sensor
    )
