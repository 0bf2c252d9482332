"""Deep deterministic policy gradient."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError, DivergenceError
from advbench.rl.losses import SquaredError
from advbench.rl.mlp import BoundedHead, IdentityHead, Mlp
from advbench.rl.optim import MomentumSgd, clip_by_global_norm
from advbench.rl.replay import Batch, ReplayBuffer
from advbench.sim.vehicle import ACTION_HIGH, ACTION_LOW

log = logging.getLogger(__name__)


@dataclass_json
@dataclass
class DdpgConfig:
    """DDPG hyper-parameters; part of every experiment's comparison contract."""

    gamma: float = 0.99
    tau: float = 0.005
    actor_lr: float = 1e-4
    critic_lr: float = 1e-3
    momentum: float = 0.9
    batch_size: int = 64
    warmup_steps: int = 1000
    episodes_max: int = 1000
    buffer_capacity: int = 100_000
    hidden_sizes: List[int] = field(default_factory=lambda: [64, 64])
    reward_scale: float = 1.0
    max_grad_norm: Optional[float] = None
    ou_theta: float = 0.15
    ou_mu: float = 0.0
    ou_sigma: float = 0.2
    ou_dt: float = 1.0
    noise_floor: float = 0.1
    noise_anneal_span: float = 0.5
    stop_on_convergence: bool = True
    seed: int = 0

    def validate(self) -> "DdpgConfig":
        checks = [
            (0.0 <= self.gamma < 1.0, "gamma must be in [0, 1)"),
            (0.0 < self.tau <= 1.0, "tau must be in (0, 1]"),
            (self.actor_lr > 0 and self.critic_lr > 0, "step sizes must be > 0"),
            (0.0 <= self.momentum < 1.0, "momentum must be in [0, 1)"),
            (self.batch_size >= 1, "batch_size must be >= 1"),
            (self.warmup_steps >= 0, "warmup_steps must be >= 0"),
            (self.episodes_max >= 1, "episodes_max must be >= 1"),
            (self.buffer_capacity >= self.batch_size, "buffer_capacity must be >= batch_size"),
            (all(n >= 1 for n in self.hidden_sizes), "hidden sizes must be >= 1"),
            (self.reward_scale > 0, "reward_scale must be > 0"),
            (self.max_grad_norm is None or self.max_grad_norm > 0, "max_grad_norm must be > 0"),
            (self.ou_theta >= 0 and self.ou_sigma >= 0 and self.ou_dt > 0, "invalid OU parameters"),
            (0.0 <= self.noise_floor <= 1.0, "noise_floor must be in [0, 1]"),
            (0.0 <= self.noise_anneal_span <= 1.0, "noise_anneal_span must be in [0, 1]"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigurationError(f"ddpg: {message}")
        return self


@dataclass
class UpdateDiagnostics:
    skipped: bool
    critic_loss: float = 0.0
    mean_q: float = 0.0
    critic_grad_norm: float = 0.0
    actor_grad_norm: float = 0.0


def soft_update(target: Mlp, source: Mlp, tau: float):
    """``target <- tau * source + (1 - tau) * target`` in place."""
    for target_param, param in zip(target.parameters(), source.parameters()):
        target_param *= 1.0 - tau
        target_param += tau * param


class DdpgAgent:
    """Actor, critic, their target copies and optimizers."""

    def __init__(
        self,
        obs_dim: int,
        config: DdpgConfig,
        action_low: np.ndarray = ACTION_LOW,
        action_high: np.ndarray = ACTION_HIGH,
        rng: Optional[np.random.Generator] = None,
    ):
        self.config = config
        self.obs_dim = obs_dim
        self.action_low = np.asarray(action_low, dtype=np.float64)
        self.action_high = np.asarray(action_high, dtype=np.float64)
        self.action_dim = len(self.action_low)
        rng = rng or np.random.default_rng(config.seed)
        hidden = list(config.hidden_sizes)
        self.actor = Mlp(
            [obs_dim, *hidden, self.action_dim],
            BoundedHead(tuple(self.action_low), tuple(self.action_high)),
            rng,
        )
        self.critic = Mlp([obs_dim + self.action_dim, *hidden, 1], IdentityHead(), rng)
        self.target_actor = self.actor.copy()
        self.target_critic = self.critic.copy()
        self.actor_optimizer = MomentumSgd(
            self.actor.parameters(), config.actor_lr, config.momentum
        )
        self.critic_optimizer = MomentumSgd(
            self.critic.parameters(), config.critic_lr, config.momentum
        )

    def act(self, observation: np.ndarray) -> np.ndarray:
        return self.actor.forward(observation)

    def all_finite(self) -> bool:
        return all(
            net.all_finite()
            for net in (self.actor, self.critic, self.target_actor, self.target_critic)
        )


def critic_targets(agent: DdpgAgent, batch: Batch, config: DdpgConfig) -> np.ndarray:
    """``scale * r + gamma * (1 - done) * Q'(s', mu'(s'))``; ``scale`` is 1 unless opted in."""
    next_actions = agent.target_actor.forward(batch.s_next)
    next_q = agent.target_critic.forward(np.hstack([batch.s_next, next_actions]))[:, 0]
    rewards = batch.r * config.reward_scale
    if config.gamma == 0.0:
        return rewards
    return rewards + config.gamma * (1.0 - batch.done) * next_q


def ddpg_update(agent: DdpgAgent, buffer: ReplayBuffer, config: DdpgConfig) -> UpdateDiagnostics:
    """
    One critic regression step, one actor ascent step and a soft target update.

    Parameters
    ----------
    agent : DdpgAgent
        Networks to update in place
    buffer : ReplayBuffer
        Experience source
    config : DdpgConfig
        Hyper-parameters

    Returns
    -------
    UpdateDiagnostics
        ``skipped`` when the buffer holds fewer than ``batch_size`` transitions

    Raises
    ------
    DivergenceError
        Any parameter became non-finite
    """
    if len(buffer) < config.batch_size:
        return UpdateDiagnostics(skipped=True)

    batch = buffer.sample(config.batch_size)
    targets = critic_targets(agent, batch, config)

    q, critic_cache = agent.critic.forward_with_cache(np.hstack([batch.s, batch.a]))
    loss = SquaredError(targets[:, None])
    critic_grads, _ = agent.critic.backward(critic_cache, loss.grad(q))
    critic_norm = clip_by_global_norm(critic_grads, config.max_grad_norm)
    agent.critic_optimizer.step(critic_grads)

    actions, actor_cache = agent.actor.forward_with_cache(batch.s)
    q_pi, q_cache = agent.critic.forward_with_cache(np.hstack([batch.s, actions]))
    _, grad_inputs = agent.critic.backward(
        q_cache, np.full_like(q_pi, 1.0 / config.batch_size)
    )
    # ascend Q: descend -Q
    actor_grads, _ = agent.actor.backward(actor_cache, -grad_inputs[:, agent.obs_dim :])
    actor_norm = clip_by_global_norm(actor_grads, config.max_grad_norm)
    agent.actor_optimizer.step(actor_grads)

    soft_update(agent.target_actor, agent.actor, config.tau)
    soft_update(agent.target_critic, agent.critic, config.tau)

    if not agent.all_finite():
        raise DivergenceError("non-finite network parameters after update")

    return UpdateDiagnostics(
        skipped=False,
        critic_loss=loss.value(q),
        mean_q=float(np.mean(q)),
        critic_grad_norm=critic_norm,
        actor_grad_norm=actor_norm,
    )


def exploratory_action(
    agent: DdpgAgent, observation: np.ndarray, noise: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Actor output plus noise, clamped to the action bounds; also returns the raw output."""
    raw = agent.act(observation)
    return np.clip(raw + noise, agent.action_low, agent.action_high), raw
