"""Side-by-side comparison of two subjects under one objective."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from dataclasses_json import dataclass_json

from advbench.core.errors import UsageError
from advbench.core.normalizer import render_template
from advbench.metrics.records import AggregateResult
from advbench.rewards import ObjectiveKind

log = logging.getLogger(__name__)

# (metric key, row label, value format)
TABLE_ROWS: Tuple[Tuple[str, str, str], ...] = (
    ("episodes_to_convergence", "Number of episodes to convergence", "{:.0f}"),
    ("optimal_return", "Optimal return", "{:.0f}"),
    ("time_to_collision", "Time to collision", "{:.2f}s"),
)

NOT_APPLICABLE = "n/a"


@dataclass_json
@dataclass
class ComparisonRow:
    metric: str
    label: str
    value_a: Optional[float]
    value_b: Optional[float]
    template: str = "{}"

    @property
    def delta(self) -> Optional[float]:
        if self.value_a is None or self.value_b is None:
            return None
        return self.value_b - self.value_a

    def text(self, value: Optional[float]) -> str:
        return NOT_APPLICABLE if value is None else self.template.format(value)

    @property
    def text_a(self) -> str:
        return self.text(self.value_a)

    @property
    def text_b(self) -> str:
        return self.text(self.value_b)


@dataclass_json
@dataclass
class ComparisonReport:
    """Three-column table (metric, subject A, subject B) plus interpretation labels."""

    subject_a: str
    subject_b: str
    objective: str
    runs_a: int
    runs_b: int
    rows: List[ComparisonRow] = field(default_factory=list)
    labels: List[str] = field(default_factory=list)

    @property
    def runs_label(self) -> str:
        return str(self.runs_a) if self.runs_a == self.runs_b else f"{self.runs_a}/{self.runs_b}"

    def row(self, metric: str) -> ComparisonRow:
        return next(r for r in self.rows if r.metric == metric)

    def column_widths(self) -> Tuple[int, int]:
        first = max([len("Metric")] + [len(r.label) for r in self.rows])
        second = max([len(self.subject_a)] + [len(r.text_a) for r in self.rows])
        return first, second

    def render(self) -> str:
        return render_template("comparison.txt.jinja", obj=self)


def _larger(
    a: Optional[float], b: Optional[float], name_a: str, name_b: str
) -> Optional[str]:
    if a is None or b is None or a == b:
        return None
    return name_a if a > b else name_b


def interpretation_labels(a: AggregateResult, b: AggregateResult) -> List[str]:
    """
    Labels read off the aggregates.

    Longer time to collision and more episodes to convergence mean more
    resilience; a larger adversary optimal return means weaker robustness;
    more damage to the adversary makes the subject costlier to attack.
    """
    hazard = ObjectiveKind(a.objective).label
    labels = []
    rules = (
        ("time_to_collision", f"more resilient to {hazard} (time to collision)"),
        ("episodes_to_convergence", f"more resilient to {hazard} (episodes to convergence)"),
        ("optimal_return", "less robust (optimal return)"),
        ("damage_adversary", "costlier to attack (adversary damage)"),
    )
    for metric, text in rules:
        winner = _larger(a.mean(metric), b.mean(metric), a.subject, b.subject)
        if winner is not None:
            labels.append(f"{winner}: {text}")
    return labels


def compare(a: AggregateResult, b: AggregateResult) -> ComparisonReport:
    """
    Compare two aggregated result sets.

    Raises
    ------
    UsageError
        The sets were produced for different objectives or carry different metrics
    """
    if a.objective != b.objective:
        raise UsageError(f"cannot compare objectives {a.objective} and {b.objective}")
    if set(a.metrics) != set(b.metrics):
        raise UsageError("result sets carry different metrics")
    rows = [
        ComparisonRow(metric, label, a.mean(metric), b.mean(metric), template)
        for metric, label, template in TABLE_ROWS
    ]
    return ComparisonReport(
        subject_a=a.subject,
        subject_b=b.subject,
        objective=a.objective,
        runs_a=a.runs,
        runs_b=b.runs,
        rows=rows,
        labels=interpretation_labels(a, b),
    )
