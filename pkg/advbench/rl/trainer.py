"""DDPG training loop over the driving environment."""

import logging
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from advbench.core.cache import write_cache
from advbench.core.errors import ConfigurationError, DivergenceError
from advbench.core.log import tracing
from advbench.env import DrivingEnv
from advbench.metrics.convergence import episodes_to_convergence
from advbench.metrics.records import ConvergenceCriterion, TrainingRecord
from advbench.rewards import ObjectiveSpec, TerminalReason
from advbench.rl.ddpg import DdpgAgent, DdpgConfig, ddpg_update, exploratory_action
from advbench.rl.noise import OuNoise
from advbench.rl.replay import ReplayBuffer, Transition
from advbench.sim.vehicle import Action

log = logging.getLogger(__name__)

LOG_EVERY = 10


class Role(str, Enum):
    """Which vehicle the trained actor drives."""

    adversary = "adversary"
    subject = "subject"


def seed_streams(seed: int) -> Tuple[np.random.Generator, int, int, np.random.Generator]:
    """Independent streams for networks, replay, noise and episode layouts."""
    children = np.random.SeedSequence(seed).spawn(4)
    return (
        np.random.default_rng(children[0]),
        int(children[1].generate_state(1)[0]),
        int(children[2].generate_state(1)[0]),
        np.random.default_rng(children[3]),
    )


def write_divergence_dump(
    dump_dir: Union[str, Path], agent: DdpgAgent, record: TrainingRecord, episode: int
) -> Path:
    return write_cache(
        {
            "episode": episode,
            "record": record.to_dict(),
            "actor": agent.actor.flat_parameters(),
            "critic": agent.critic.flat_parameters(),
        },
        Path(dump_dir) / f"divergence_seed{record.seed}_ep{episode}.pkl.lzma",
    )


@tracing
def train(
    env: DrivingEnv,
    role: Role,
    objective: ObjectiveSpec,
    config: DdpgConfig,
    criterion: Optional[ConvergenceCriterion] = None,
    dump_dir: Optional[Union[str, Path]] = None,
) -> Tuple[DdpgAgent, TrainingRecord]:
    """
    Train an actor for the learner slot of ``env``.

    Parameters
    ----------
    env : DrivingEnv
        Environment built for ``objective``
    role : Role
        ``adversary`` for adversarial objectives, ``subject`` for track driving
    objective : ObjectiveSpec
        Objective the environment rewards
    config : DdpgConfig
        Hyper-parameters; ``config.seed`` fixes the whole run
    criterion : ConvergenceCriterion, optional
        Stops training early when ``config.stop_on_convergence`` is set
    dump_dir : Union[str, Path], optional
        Where a diagnostic dump is written if parameters diverge

    Returns
    -------
    Tuple[DdpgAgent, TrainingRecord]
        Trained networks and the per-episode record

    Raises
    ------
    DivergenceError
        Network parameters became non-finite
    """
    config.validate()
    role = Role(role)
    if env.objective != objective:
        raise ConfigurationError("environment was built for a different objective")
    expected = Role.adversary if objective.kind.adversarial else Role.subject
    if role != expected:
        raise ConfigurationError(
            f"objective {objective.kind.value} trains the {expected.value}, not the {role.value}"
        )
    criterion = criterion or ConvergenceCriterion()

    net_rng, buffer_seed, noise_seed, episode_rng = seed_streams(config.seed)
    agent = DdpgAgent(env.observation_size, config, rng=net_rng)
    buffer = ReplayBuffer(
        config.buffer_capacity, env.observation_size, agent.action_dim, seed=buffer_seed
    )
    noise = OuNoise(
        agent.action_dim,
        theta=config.ou_theta,
        mu=config.ou_mu,
        sigma=config.ou_sigma,
        dt=config.ou_dt,
        seed=noise_seed,
    )
    record = TrainingRecord(config=config.to_dict(), seed=config.seed)
    total_steps = 0

    for episode in range(config.episodes_max):
        observation = env.reset(int(episode_rng.integers(2**31 - 1)), episode)
        noise.reset()
        noise.anneal(episode / config.episodes_max, config.noise_floor, config.noise_anneal_span)
        episode_return = 0.0
        steps = 0
        while True:
            action, _ = exploratory_action(agent, observation, noise.sample())
            result = env.step(Action.from_array(action))
            episode_return += result.record.value
            steps += 1
            total_steps += 1
            buffer.add(
                Transition(
                    observation,
                    action,
                    result.record.value,
                    result.observation,
                    result.status.terminal,
                )
            )
            observation = result.observation
            if total_steps > config.warmup_steps:
                try:
                    diagnostics = ddpg_update(agent, buffer, config)
                except DivergenceError as exc:
                    if dump_dir is not None:
                        exc.dump_path = write_divergence_dump(dump_dir, agent, record, episode)
                    log.error(f"training diverged in episode {episode}: {exc}")
                    raise
                if not diagnostics.skipped:
                    log.trace(f"update {total_steps}: {diagnostics}")
            if result.status.terminal:
                break

        record.append(episode_return, steps, result.status.reason == TerminalReason.success)
        if (episode + 1) % LOG_EVERY == 0:
            log.info(
                f"episode {episode + 1}/{config.episodes_max}: return {episode_return:.2f}, "
                f"steps {steps}, successes in block "
                f"{sum(record.successes[-LOG_EVERY:])}/{LOG_EVERY}"
            )
        if config.stop_on_convergence and len(record) >= criterion.min_episodes:
            converged = episodes_to_convergence(record, criterion)
            if converged is not None:
                log.info(f"converged at episode {converged}, stopping after {len(record)}")
                break

    return agent, record
