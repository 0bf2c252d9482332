"""Policies under test and scripted traffic."""

from advbench.policies.base import ConstantPolicy, Policy
from advbench.policies.learned import learned_policy
from advbench.policies.observation import Observation, SensorConfig, observe
from advbench.policies.potential_field import potential_field_policy
from advbench.policies.pursuit import null_policy, traffic_bot
from advbench.policies.receding_horizon import receding_horizon_policy
from advbench.policies.registry import PolicyKind, PolicySpec, make_policy

__all__ = [
    "ConstantPolicy",
    "Observation",
    "Policy",
    "PolicyKind",
    "PolicySpec",
    "SensorConfig",
    "learned_policy",
    "make_policy",
    "null_policy",
    "observe",
    "potential_field_policy",
    "receding_horizon_policy",
    "traffic_bot",
]
