"""Records produced by training, evaluation and aggregation."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError

METRIC_NAMES = (
    "episodes_to_convergence",
    "optimal_return",
    "time_to_collision",
    "distance_to_collision",
    "damage_target",
    "damage_adversary",
    "success_rate",
)


@dataclass_json
@dataclass
class TrainingRecord:
    """Per-episode returns, step counts and success flags of one training run."""

    returns: List[float] = field(default_factory=list)
    steps: List[int] = field(default_factory=list)
    successes: List[bool] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if not len(self.returns) == len(self.steps) == len(self.successes):
            raise ConfigurationError("training record lists must have equal length")

    def __len__(self) -> int:
        return len(self.returns)

    def append(self, episode_return: float, steps: int, success: bool = False):
        self.returns.append(float(episode_return))
        self.steps.append(int(steps))
        self.successes.append(bool(success))


@dataclass_json
@dataclass(frozen=True)
class ConvergenceCriterion:
    """Moving-window plateau: ``window`` episodes, relative tolerance ``epsilon``."""

    window: int = 50
    epsilon: float = 0.05
    min_episodes: int = 100

    def __post_init__(self):
        if self.window < 2:
            raise ConfigurationError(f"convergence.window must be >= 2, got {self.window}")
        if not self.epsilon > 0:
            raise ConfigurationError(f"convergence.epsilon must be > 0, got {self.epsilon}")
        if self.min_episodes < 0:
            raise ConfigurationError("convergence.min_episodes must be >= 0")


@dataclass_json
@dataclass
class BenchmarkResult:
    """
    Metrics of one repetition.

    ``None`` marks a metric that does not apply: no convergence, or no
    successful collision during evaluation.
    """

    subject: str
    objective: str
    seed: int
    episodes_to_convergence: Optional[int]
    optimal_return: float
    time_to_collision: Optional[float]
    distance_to_collision: Optional[float]
    damage_target: float
    damage_adversary: float
    success_rate: float
    episodes_trained: int = 0
    run: int = 0

    def __post_init__(self):
        if self.time_to_collision is not None and self.time_to_collision < 0:
            raise ConfigurationError("time_to_collision must be >= 0")

    @property
    def converged(self) -> bool:
        return self.episodes_to_convergence is not None


@dataclass_json
@dataclass(frozen=True)
class MetricSummary:
    count: int
    mean: Optional[float] = None
    std: Optional[float] = None
    min: Optional[float] = None
    max: Optional[float] = None


@dataclass_json
@dataclass
class AggregateResult:
    """Statistics of one subject and objective over repeated runs."""

    subject: str
    objective: str
    runs: int
    not_converged: int
    metrics: Dict[str, MetricSummary] = field(default_factory=dict)

    def summary(self, metric: str) -> MetricSummary:
        return self.metrics.get(metric, MetricSummary(count=0))

    def mean(self, metric: str) -> Optional[float]:
        return self.summary(metric).mean
