"""SVG training curves and time-to-collision histograms."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from advbench.core.normalizer import render_template
from advbench.metrics.convergence import window_means
from advbench.metrics.records import TrainingRecord

log = logging.getLogger(__name__)

WIDTH = 640
HEIGHT = 360
MARGIN = 48


@dataclass
class PlotArea:
    x_range: Tuple[float, float]
    y_range: Tuple[float, float]
    width: int = WIDTH
    height: int = HEIGHT
    margin: int = MARGIN

    def x(self, value: float) -> float:
        low, high = self.x_range
        span = high - low or 1.0
        return self.margin + (value - low) / span * (self.width - 2 * self.margin)

    def y(self, value: float) -> float:
        low, high = self.y_range
        span = high - low or 1.0
        return self.height - self.margin - (value - low) / span * (self.height - 2 * self.margin)

    def points(self, xs: Sequence[float], ys: Sequence[float]) -> str:
        return " ".join(f"{self.x(a):.2f},{self.y(b):.2f}" for a, b in zip(xs, ys))


@dataclass
class Series:
    label: str
    color: str
    points: str


@dataclass
class Bar:
    x: float
    y: float
    width: float
    height: float
    count: int


def curve_svg(record: TrainingRecord, window: int = 50, title: str = "Training curve") -> str:
    """Episode vs. return with a moving-window mean."""
    returns = np.asarray(record.returns, dtype=np.float64)
    episodes = np.arange(len(returns))
    if returns.size:
        y_range = (float(returns.min()), float(returns.max()))
    else:
        y_range = (0.0, 1.0)
    area = PlotArea((0.0, float(max(len(returns) - 1, 1))), y_range)
    series = [Series("return", "#4878a8", area.points(episodes, returns))]
    if len(returns) >= window:
        means = window_means(returns, window)[window:]
        series.append(
            Series(
                f"mean of last {window}",
                "#c44e52",
                area.points(np.arange(window - 1, len(returns)), means),
            )
        )
    return render_template(
        "curve.svg.jinja",
        area=area,
        series=series,
        title=title,
        x_label="episode",
        y_label="return",
    )


def histogram_svg(
    values: Sequence[float], bins: int = 10, title: str = "Time to collision"
) -> str:
    """Histogram of per-episode times to collision in seconds."""
    data = np.asarray(values, dtype=np.float64)
    if data.size:
        counts, edges = np.histogram(data, bins=bins)
    else:
        counts, edges = np.zeros(bins, dtype=int), np.linspace(0.0, 1.0, bins + 1)
    area = PlotArea((float(edges[0]), float(edges[-1])), (0.0, float(max(counts.max(), 1))))
    bars: List[Bar] = []
    for count, left, right in zip(counts, edges[:-1], edges[1:]):
        top = area.y(float(count))
        bars.append(
            Bar(
                x=area.x(float(left)),
                y=top,
                width=area.x(float(right)) - area.x(float(left)),
                height=area.y(0.0) - top,
                count=int(count),
            )
        )
    return render_template(
        "histogram.svg.jinja",
        area=area,
        bars=bars,
        title=title,
        x_label="seconds",
        y_label="episodes",
    )


def write_svg(svg: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(svg, encoding="utf-8")
    log.debug(f"Wrote plot {path}...")
    return path


def write_curve(
    record: TrainingRecord, path: Union[str, Path], window: int = 50, title: Optional[str] = None
) -> Path:
    return write_svg(curve_svg(record, window, title or f"Training curve, seed {record.seed}"), path)
