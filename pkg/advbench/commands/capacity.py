"""Advbench capacity command: traffic-density scan."""

import logging
from dataclasses import dataclass
from typing import Optional

import pandas as pd
import typer
from dataclasses_json import dataclass_json
from typing_extensions import Annotated

from advbench.commands.utils.options import ConfigOption, OutOption, SeedOption, require_config
from advbench.core.log import tracing
from advbench.core.normalizer import DataFrameNormalizer
from advbench.harness.runner import run_capacity
from advbench.pandas.results import FLOAT_FORMAT

log = logging.getLogger(__name__)

CAPACITY_FILE = "capacity.csv"


@dataclass_json
@dataclass
class CapacityNormalizer(DataFrameNormalizer):
    """Collision-free rate per traffic count."""

    threshold: Optional[int] = None

    def render(self) -> str:
        threshold = "none" if self.threshold is None else str(self.threshold)
        return f"{self.raw_results.to_string(index=False)}\ncapacity threshold: {threshold}\n"


@tracing
def capacity(
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    min_traffic: Annotated[int, typer.Option(help="Smallest traffic count scanned.")] = 0,
    max_traffic: Annotated[int, typer.Option(help="Largest traffic count scanned.")] = 8,
    trials: Annotated[int, typer.Option(help="Episodes per traffic count.")] = 20,
):
    """Largest number of traffic vehicles the subject survives in 95% of trials."""
    experiment = require_config(config, seed)
    rates, threshold = run_capacity(
        experiment, list(range(min_traffic, max_traffic + 1)), trials
    )
    df = pd.DataFrame(
        [dict(traffic=n, collision_free_rate=rate) for n, rate in rates.items()]
    )
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        df.to_csv(out / CAPACITY_FILE, index=False, float_format=FLOAT_FORMAT)
    return CapacityNormalizer(
        service="capacity",
        raw_results=df,
        arguments=dict(config=str(config), seed=seed, trials=trials),
        threshold=threshold,
    )
