"""Seeded, repeated train-then-evaluate experiments."""

import json
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from dataclasses_json import dataclass_json

from advbench.core.cache import read_cache, run_cache_path, write_cache
from advbench.core.errors import ConfigurationError, DivergenceError
from advbench.core.log import configure_worker_logging, package_level, tracing
from advbench.env import DrivingEnv, EpisodeOutcome, run_episode
from advbench.harness.config import ExperimentConfig
from advbench.harness.manifest import RunEntry, RunManifest, RunStatus, load_manifest, save_manifest
from advbench.harness.plots import write_curve
from advbench.metrics.aggregate import mean_or_none
from advbench.metrics.capacity import capacity_scan, threshold_from_rates
from advbench.metrics.convergence import episodes_to_convergence, optimal_return
from advbench.metrics.episodes import damage_totals, distance_to_collision, time_to_collision
from advbench.metrics.records import BenchmarkResult, TrainingRecord
from advbench.pandas.results import read_results_csv, write_results_csv
from advbench.policies.learned import learned_policy
from advbench.policies.registry import make_policy
from advbench.rewards import ObjectiveKind, ObjectiveSpec
from advbench.rl.checkpoint import save_checkpoint
from advbench.rl.mlp import Mlp
from advbench.rl.trainer import Role, train
from advbench.sim.trace import TraceFrame, save_trace

log = logging.getLogger(__name__)

RESULTS_FILE = "results.csv"
EVALUATION_STREAM = 0x5EED


@dataclass
class RunOutcome:
    index: int
    seed: int
    result: Optional[BenchmarkResult] = None
    record: Optional[TrainingRecord] = None
    artifacts: Dict[str, str] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class ExperimentResults:
    manifest: RunManifest
    results: List[BenchmarkResult]
    out_dir: Path


def artifact_names(index: int) -> Dict[str, str]:
    return {
        "checkpoint": f"actor_{index}.ckpt",
        "trace": f"trace_{index}.jsonl",
        "record": f"record_{index}.json",
        "curve": f"curve_{index}.svg",
        "cache": run_cache_path(".", index).name,
    }


def evaluation_seeds(seed: int, count: int) -> List[int]:
    """Evaluation layouts, disjoint from the training stream of the same seed."""
    state = np.random.SeedSequence([seed, EVALUATION_STREAM]).generate_state(count)
    return [int(s) for s in state]


def role_for(config: ExperimentConfig) -> Role:
    return Role.adversary if config.objective.kind.adversarial else Role.subject


def build_env(config: ExperimentConfig, traffic_count: Optional[int] = None) -> DrivingEnv:
    subject = None
    if config.objective.kind.adversarial:
        subject = make_policy(config.subject, config.sensor, config.physics.dt)
    return DrivingEnv(
        config.load_track(),
        config.objective,
        subject_policy=subject,
        traffic_count=config.experiment.traffic_count if traffic_count is None else traffic_count,
        scenario=config.scenario,
        physics=config.physics,
        sensor=config.sensor,
        vehicle_spec=config.vehicle,
    )


def evaluate_actor(
    config: ExperimentConfig, actor: Mlp, seed: int, episodes: Optional[int] = None
) -> List[EpisodeOutcome]:
    """Run the trained actor without exploration noise."""
    env = build_env(config)
    policy = learned_policy(actor, config.sensor)
    count = episodes if episodes is not None else config.experiment.eval_episodes
    return [
        run_episode(env, policy, episode_seed, episode=i)
        for i, episode_seed in enumerate(evaluation_seeds(seed, count))
    ]


@dataclass_json
@dataclass
class EvaluationSummary:
    """Test-time metrics over evaluation episodes; ``None`` when no episode succeeded."""

    episodes: int
    success_rate: float
    time_to_collision: Optional[float]
    distance_to_collision: Optional[float]
    damage_target: float
    damage_adversary: float
    times: List[Optional[float]] = field(default_factory=list)


def summarize_evaluation(
    config: ExperimentConfig, outcomes: List[EpisodeOutcome]
) -> EvaluationSummary:
    objective = config.objective
    target, adversary = objective.target_id, objective.adversary_id
    times, distances, target_damage, adversary_damage = [], [], [], []
    for outcome in outcomes:
        times.append(time_to_collision(outcome.frames, target, adversary, objective.kind))
        distances.append(distance_to_collision(outcome.frames, target, adversary, objective.kind))
        damage = damage_totals(outcome.frames, target, adversary)
        target_damage.append(damage[0])
        adversary_damage.append(damage[1])
    count = len(outcomes)
    return EvaluationSummary(
        episodes=count,
        success_rate=sum(o.success for o in outcomes) / count if count else 0.0,
        time_to_collision=mean_or_none(times),
        distance_to_collision=mean_or_none(distances),
        damage_target=float(np.mean(target_damage)) if count else 0.0,
        damage_adversary=float(np.mean(adversary_damage)) if count else 0.0,
        times=times,
    )


def benchmark_result(
    config: ExperimentConfig,
    index: int,
    record: TrainingRecord,
    outcomes: List[EpisodeOutcome],
) -> BenchmarkResult:
    """Per-run metrics: training record plus evaluation episodes."""
    converged = episodes_to_convergence(record, config.convergence)
    evaluation = summarize_evaluation(config, outcomes)
    return BenchmarkResult(
        subject=config.subject.label,
        objective=config.objective.kind.value,
        seed=config.run_seed(index),
        episodes_to_convergence=converged,
        optimal_return=optimal_return(record, converged, config.convergence),
        time_to_collision=evaluation.time_to_collision,
        distance_to_collision=evaluation.distance_to_collision,
        damage_target=evaluation.damage_target,
        damage_adversary=evaluation.damage_adversary,
        success_rate=evaluation.success_rate,
        episodes_trained=len(record),
        run=index,
    )


def execute_run(config: ExperimentConfig, index: int, out_dir: Union[str, Path]) -> RunOutcome:
    """
    Train, evaluate and persist one repetition.

    Self-contained so it can run in a worker process; a divergence is
    reported in the outcome instead of raised.
    """
    out_dir = Path(out_dir)
    seed = config.run_seed(index)
    names = artifact_names(index)
    log.info(f"run {index} (seed {seed}) starting")
    try:
        env = build_env(config)
        agent, record = train(
            env,
            role_for(config),
            config.objective,
            config.ddpg_for_run(index),
            config.convergence,
            dump_dir=out_dir,
        )
    except DivergenceError as exc:
        log.error(f"run {index} (seed {seed}) failed: {exc}")
        return RunOutcome(index, seed, error=str(exc))

    outcomes = evaluate_actor(config, agent.actor, seed)
    result = benchmark_result(config, index, record, outcomes)

    save_checkpoint(agent.actor, out_dir / names["checkpoint"])
    frames: List[TraceFrame] = [f for o in outcomes for f in o.frames]
    save_trace(frames, out_dir / names["trace"])
    (out_dir / names["record"]).write_text(
        json.dumps(record.to_dict(encode_json=True), sort_keys=True) + "\n", encoding="utf-8"
    )
    write_curve(record, out_dir / names["curve"], config.convergence.window)
    outcome = RunOutcome(index, seed, result, record, names)
    write_cache(outcome, out_dir / names["cache"])
    log.info(
        f"run {index} finished: converged at {result.episodes_to_convergence}, "
        f"success rate {result.success_rate:.2f}"
    )
    return outcome


def components(config: ExperimentConfig) -> Dict[str, str]:
    objective = config.objective
    if objective.kind.adversarial:
        environment = f"2D kinematic simulator, {2 + config.experiment.traffic_count} vehicles"
    else:
        environment = f"2D kinematic simulator, {1 + config.experiment.traffic_count} vehicles"
    return {
        "environment": environment,
        "subject": config.subject.label,
        "objective": objective.kind.value,
        "reward": reward_description(config),
        "model": "DDPG, hidden layers " + "x".join(str(n) for n in config.ddpg.hidden_sizes),
        "exploration": "Ornstein-Uhlenbeck",
        "training_metrics": "episodes to convergence, optimal return",
        "test_metrics": "seconds to collision, distance to collision, damage",
    }


def reward_description(config: ExperimentConfig) -> str:
    o = config.objective
    kind = o.kind
    if kind == ObjectiveKind.direct_collision:
        return f"eta * {o.c_prime!r} - d(target, adversary)"
    if kind == ObjectiveKind.induced_collision:
        return f"eta_t * {o.c_t!r} - d(target, adversary) - eta_adv * {o.c_adv!r}"
    if kind == ObjectiveKind.trajectory_manipulation:
        return "-d(target, adversary) - d(target, reference)"
    if kind == ObjectiveKind.track_driving_with_collision:
        return f"v cos(theta) - v sin(theta) - v |offset| - {o.c!r} on collision"
    return "v cos(theta) - v sin(theta) - v |offset|"


def new_manifest(config: ExperimentConfig) -> RunManifest:
    return RunManifest(
        config_hash=config.config_hash,
        name=config.experiment.name,
        components=components(config),
        config=dict(config.values),
        runs=[
            RunEntry(index=i, seed=config.run_seed(i), artifacts=artifact_names(i))
            for i in range(config.repetitions)
        ],
    )


def _cached_outcome(out_dir: Path, entry: RunEntry) -> Optional[RunOutcome]:
    if entry.status != RunStatus.completed:
        return None
    outcome = read_cache(run_cache_path(out_dir, entry.index))
    if isinstance(outcome, RunOutcome) and outcome.seed == entry.seed and not outcome.failed:
        return outcome
    return None


@tracing
def run_experiment(
    config: ExperimentConfig,
    out_dir: Optional[Union[str, Path]] = None,
    workers: Optional[int] = None,
) -> ExperimentResults:
    """
    Run every repetition of ``config`` and write the manifest and results.

    Completed runs recorded in an existing manifest for the same config are
    loaded from the run cache instead of re-run.

    Parameters
    ----------
    config : ExperimentConfig
        Experiment
    out_dir : Union[str, Path], optional
        Output directory, defaults to the config's
    workers : int, optional
        Worker processes; 1 runs in this process

    Returns
    -------
    ExperimentResults
        Manifest, results of the completed runs in run order, output directory

    Raises
    ------
    ConfigurationError
        ``out_dir`` already holds a different experiment
    """
    out_dir = config.output_dir(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = workers or config.experiment.workers

    manifest = load_manifest(out_dir)
    if manifest is not None and manifest.config_hash != config.config_hash:
        raise ConfigurationError(
            f"{out_dir} holds results of config {manifest.config_hash[:12]}, "
            f"not {config.config_hash[:12]}"
        )
    fresh = new_manifest(config)
    if manifest is not None:
        for entry in fresh.runs:
            previous = next((r for r in manifest.runs if r.index == entry.index), None)
            if previous is not None:
                entry.status = previous.status
    manifest = fresh

    outcomes: Dict[int, RunOutcome] = {}
    pending: List[int] = []
    for entry in manifest.runs:
        cached = _cached_outcome(out_dir, entry)
        if cached is not None:
            log.info(f"run {entry.index} already completed, skipping")
            outcomes[entry.index] = cached
        else:
            entry.status = RunStatus.pending
            pending.append(entry.index)
    save_manifest(manifest, out_dir)

    def record_outcome(outcome: RunOutcome):
        outcomes[outcome.index] = outcome
        entry = manifest.run(outcome.index)
        entry.status = RunStatus.failed if outcome.failed else RunStatus.completed
        entry.error = outcome.error
        save_manifest(manifest, out_dir)

    if workers <= 1 or len(pending) <= 1:
        for index in pending:
            record_outcome(execute_run(config, index, out_dir))
    else:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=configure_worker_logging,
            initargs=(package_level(),),
        ) as executor:
            fut_to_idx = {
                executor.submit(execute_run, config, index, out_dir): index for index in pending
            }
            for fut in as_completed(fut_to_idx):
                record_outcome(fut.result())

    results = [
        outcomes[i].result for i in sorted(outcomes) if not outcomes[i].failed
    ]
    write_results_csv(results, out_dir / RESULTS_FILE)
    failed = len(manifest.failed())
    if failed:
        log.error(f"{failed} of {config.repetitions} runs failed")
    return ExperimentResults(manifest, results, out_dir)


def load_results(out_dir: Union[str, Path]) -> Tuple[RunManifest, List[BenchmarkResult]]:
    """Manifest and results of a finished experiment directory."""
    out_dir = Path(out_dir)
    manifest = load_manifest(out_dir)
    if manifest is None:
        raise ConfigurationError(f"{out_dir} has no manifest")
    return manifest, read_results_csv(out_dir / RESULTS_FILE)


def capacity_env(config: ExperimentConfig, traffic_count: int) -> DrivingEnv:
    """The subject alone among ``traffic_count`` scripted vehicles, no adversary."""
    objective = ObjectiveSpec(
        kind=ObjectiveKind.track_driving, target_id=config.objective.target_id
    )
    return DrivingEnv(
        config.load_track(),
        objective,
        traffic_count=traffic_count,
        scenario=config.scenario,
        physics=config.physics,
        sensor=config.sensor,
        vehicle_spec=config.vehicle,
    )


@tracing
def run_capacity(
    config: ExperimentConfig, n_range: Sequence[int], trials: int
) -> Tuple[Dict[int, float], Optional[int]]:
    """Collision-free rate per traffic count and the resulting capacity threshold."""
    subject = make_policy(config.subject, config.sensor, config.physics.dt)
    rates = capacity_scan(
        lambda n: capacity_env(config, n), subject, n_range, trials, config.base_seed
    )
    return rates, threshold_from_rates(rates)
