"""Advbench eval command: evaluate a saved actor."""

import logging
from pathlib import Path
from typing import Optional

import typer
from typing_extensions import Annotated

from advbench.commands.utils.options import ConfigOption, OutOption, SeedOption, require_config
from advbench.core.log import tracing
from advbench.core.normalizer import AdvbenchResult
from advbench.harness.runner import evaluate_actor, summarize_evaluation
from advbench.policies.learned import actor_head
from advbench.rl.checkpoint import load_checkpoint
from advbench.sim.trace import save_trace

log = logging.getLogger(__name__)

TRACE_FILE = "trace_eval.jsonl"


@tracing
def evaluate(
    checkpoint: Annotated[Path, typer.Argument(help="Actor checkpoint file.")],
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    episodes: Annotated[
        Optional[int], typer.Option(help="Overrides experiment.eval_episodes.")
    ] = None,
):
    """Run evaluation episodes with a trained actor and report test-time metrics."""
    experiment = require_config(config, seed)
    actor = load_checkpoint(checkpoint, actor_head())
    outcomes = evaluate_actor(experiment, actor, experiment.base_seed, episodes)
    summary = summarize_evaluation(experiment, outcomes)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        save_trace([f for o in outcomes for f in o.frames], out / TRACE_FILE)
    return AdvbenchResult(
        service="eval",
        raw_results=summary,
        arguments=dict(checkpoint=str(checkpoint), config=str(config), seed=seed),
    )
