"""Closed-loop track model and track-relative coordinates."""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError
from advbench.sim.geometry import Vec2, wrap_angle

log = logging.getLogger(__name__)

HEADER_KEY = "halfwidth"


@dataclass_json
@dataclass(frozen=True)
class TrackFrame:
    """Pose of a vehicle relative to the track axis."""

    angle_to_axis: float
    lateral_offset: float
    arc_progress: float


@dataclass_json
@dataclass(frozen=True, eq=True)
class Track:
    """Closed centerline polyline with a constant drivable half width."""

    centerline: Tuple[Vec2, ...]
    half_width: float

    def __post_init__(self):
        object.__setattr__(self, "centerline", tuple(self.centerline))
        if len(self.centerline) < 3:
            raise ConfigurationError("track needs at least 3 waypoints")
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ConfigurationError(f"track half_width must be > 0, got {self.half_width}")
        points = self.centerline
        for idx, point in enumerate(points):
            following = points[(idx + 1) % len(points)]
            if point == following:
                raise ConfigurationError(f"waypoints {idx} and next are identical")

    @cached_property
    def points(self) -> np.ndarray:
        return np.array([[p.x, p.y] for p in self.centerline], dtype=np.float64)

    @cached_property
    def segment_vectors(self) -> np.ndarray:
        return np.roll(self.points, -1, axis=0) - self.points

    @cached_property
    def segment_lengths(self) -> np.ndarray:
        return np.hypot(self.segment_vectors[:, 0], self.segment_vectors[:, 1])

    @cached_property
    def cumulative_lengths(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.segment_lengths)[:-1]])

    @cached_property
    def segment_headings(self) -> np.ndarray:
        return np.arctan2(self.segment_vectors[:, 1], self.segment_vectors[:, 0])

    @property
    def total_length(self) -> float:
        return float(np.sum(self.segment_lengths))


def nearest_segment(track: Track, x: float, y: float) -> Tuple[int, float, float]:
    """
    Find the centerline segment nearest to a point.

    Returns
    -------
    Tuple[int, float, float]
        Segment index (lowest index on exact ties), projection parameter in
        [0, 1], and the distance to the projected point
    """
    starts = track.points
    vectors = track.segment_vectors
    rel = np.array([x, y]) - starts
    t = np.clip(
        np.einsum("ij,ij->i", rel, vectors) / (track.segment_lengths**2), 0.0, 1.0
    )
    offsets = rel - vectors * t[:, None]
    distances = np.hypot(offsets[:, 0], offsets[:, 1])
    idx = int(np.argmin(distances))
    return idx, float(t[idx]), float(distances[idx])


def track_frame(track: Track, position: Vec2, heading: float) -> TrackFrame:
    """
    Compute heading error, signed lateral offset and arc progress.

    Parameters
    ----------
    track : Track
        Track
    position : Vec2
        Vehicle center
    heading : float
        Vehicle heading in radians

    Returns
    -------
    TrackFrame
        Positive lateral offset is left of the centerline direction of travel
    """
    idx, t, distance = nearest_segment(track, position.x, position.y)
    start = track.points[idx]
    vector = track.segment_vectors[idx]
    px = position.x - (start[0] + vector[0] * t)
    py = position.y - (start[1] + vector[1] * t)
    cross = vector[0] * py - vector[1] * px
    if cross == 0.0 and distance > 0.0:
        # on the extension past a vertex; use the neighbouring segment's tangent
        neighbour = (idx + 1) % len(track.centerline) if t >= 1.0 else idx - 1
        other = track.segment_vectors[neighbour]
        cross = other[0] * py - other[1] * px
    lateral = distance if cross >= 0.0 else -distance

    arc = float(track.cumulative_lengths[idx] + t * track.segment_lengths[idx])
    total = track.total_length
    arc = arc % total
    if arc >= total:
        arc = 0.0

    return TrackFrame(
        angle_to_axis=wrap_angle(heading - float(track.segment_headings[idx])),
        lateral_offset=float(lateral),
        arc_progress=arc,
    )


def point_at(track: Track, arc: float, lateral: float = 0.0) -> Tuple[Vec2, float]:
    """Point at an arc position (wrapped) and lateral offset, plus the local tangent heading."""
    arc = arc % track.total_length
    idx = int(np.searchsorted(track.cumulative_lengths, arc, side="right") - 1)
    idx = min(max(idx, 0), len(track.centerline) - 1)
    t = (arc - track.cumulative_lengths[idx]) / track.segment_lengths[idx]
    base = track.points[idx] + track.segment_vectors[idx] * t
    heading = float(track.segment_headings[idx])
    normal = np.array([-math.sin(heading), math.cos(heading)])
    return Vec2.from_array(base + normal * lateral), heading


def unwrap_progress(start: float, end: float, total: float) -> float:
    """Signed arc distance from start to end on a loop of the given length."""
    delta = end - start
    if delta < -0.5 * total:
        delta += total
    elif delta > 0.5 * total:
        delta -= total
    return delta


def ring_track(radius: float, half_width: float, segments: int = 72) -> Track:
    """Counter-clockwise regular polygon approximating a circle."""
    angles = np.arange(segments) * (2.0 * math.pi / segments)
    return Track(
        centerline=tuple(
            Vec2(radius * math.cos(a), radius * math.sin(a)) for a in angles
        ),
        half_width=half_width,
    )


def rectangle_track(length: float, width: float, half_width: float) -> Track:
    """Counter-clockwise rectangle whose first segment runs along +x from the origin."""
    half = 0.5 * length
    return Track(
        centerline=(
            Vec2(-half, 0.0),
            Vec2(half, 0.0),
            Vec2(half, width),
            Vec2(-half, width),
        ),
        half_width=half_width,
    )


def _parse_points(lines: List[str], path: Path) -> Tuple[Vec2, ...]:
    points = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ConfigurationError(f"{path}:{number}: expected 'x y', got {line!r}")
        try:
            points.append(Vec2(float(fields[0]), float(fields[1])))
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{number}: {exc}") from exc
    return tuple(points)


def _read_lines(path: Union[str, Path]) -> Tuple[Path, List[str]]:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"{path} does not exist...")
    text = path.read_text(encoding="utf-8")
    if not text.endswith("\n"):
        raise ConfigurationError(f"{path}: missing trailing newline")
    return path, text.splitlines()


def load_track(path: Union[str, Path]) -> Track:
    """Load a track from ``halfwidth W`` followed by ``x y`` lines."""
    path, lines = _read_lines(path)
    header = lines[0].split() if lines else []
    if len(header) != 2 or header[0] != HEADER_KEY:
        raise ConfigurationError(f"{path}: first line must be '{HEADER_KEY} W'")
    try:
        half_width = float(header[1])
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    log.debug(f"Loading track from {path}...")
    return Track(centerline=_parse_points(lines[1:], path), half_width=half_width)


def load_waypoints(path: Union[str, Path]) -> Tuple[Vec2, ...]:
    """Load a headerless waypoint file (reference trajectories)."""
    path, lines = _read_lines(path)
    points = _parse_points(lines, path)
    if not points:
        raise ConfigurationError(f"{path}: no waypoints")
    return points


def save_track(track: Track, path: Union[str, Path]):
    """Write a track in the waypoint text format."""
    lines = [f"{HEADER_KEY} {track.half_width!r}"]
    lines.extend(f"{p.x!r} {p.y!r}" for p in track.centerline)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
