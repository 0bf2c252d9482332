"""Build a policy from its configuration."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError
from advbench.policies.base import Policy
from advbench.policies.learned import load_learned_policy
from advbench.policies.observation import SensorConfig
from advbench.policies.potential_field import PotentialFieldGains, PotentialFieldPolicy
from advbench.policies.pursuit import NullPolicy
from advbench.policies.receding_horizon import RecedingHorizonConfig, RecedingHorizonPolicy
from advbench.sim.world import DEFAULT_DT


class PolicyKind(str, Enum):
    """Policies available as subjects."""

    null = "null"
    potential_field = "potential_field"
    receding_horizon = "receding_horizon"
    learned = "learned"


@dataclass_json
@dataclass(frozen=True)
class PolicySpec:
    kind: PolicyKind = PolicyKind.null
    target_speed: float = 10.0
    speed_gain: float = 0.5
    k_att: float = 1.0
    k_rep: float = 200.0
    slow_radius: float = 25.0
    horizon: int = 20
    candidates: int = 9
    checkpoint: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PolicyKind(self.kind))
        if self.kind == PolicyKind.learned and not self.checkpoint:
            raise ConfigurationError("subject.checkpoint is required for a learned subject")

    @property
    def label(self) -> str:
        return self.kind.value


def make_policy(
    spec: PolicySpec, sensor: Optional[SensorConfig] = None, dt: float = DEFAULT_DT
) -> Policy:
    """Instantiate the policy ``spec`` describes."""
    if spec.kind == PolicyKind.null:
        return NullPolicy(spec.target_speed, spec.speed_gain, sensor)
    if spec.kind == PolicyKind.potential_field:
        gains = PotentialFieldGains(
            k_att=spec.k_att,
            k_rep=spec.k_rep,
            target_speed=spec.target_speed,
            slow_radius=spec.slow_radius,
            speed_gain=spec.speed_gain,
        )
        return PotentialFieldPolicy(gains, sensor)
    if spec.kind == PolicyKind.receding_horizon:
        return RecedingHorizonPolicy(
            RecedingHorizonConfig(horizon=spec.horizon, candidates=spec.candidates, dt=dt),
            sensor,
        )
    return load_learned_policy(spec.checkpoint, sensor)
