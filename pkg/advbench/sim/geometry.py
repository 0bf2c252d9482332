"""Planar geometry helpers."""

import math
from dataclasses import dataclass

import numpy as np
from dataclasses_json import dataclass_json

from advbench.core.errors import RejectedInputError

TWO_PI = 2.0 * math.pi


@dataclass_json
@dataclass(frozen=True)
class Vec2:
    """Point or displacement in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise RejectedInputError(f"non-finite Vec2 ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=np.float64)

    @classmethod
    def from_array(cls, values) -> "Vec2":
        return cls(float(values[0]), float(values[1]))


def wrap_angle(angle: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    if -math.pi <= angle < math.pi:
        return angle
    wrapped = (angle + math.pi) % TWO_PI - math.pi
    # float modulo can land exactly on +pi for tiny negative inputs
    if wrapped >= math.pi:
        wrapped -= TWO_PI
    return wrapped


def rotate_to_frame(dx: float, dy: float, heading: float):
    """Express a world-frame displacement in a body frame with the given heading."""
    c, s = math.cos(heading), math.sin(heading)
    return c * dx + s * dy, -s * dx + c * dy


def footprint_corners(
    x: float, y: float, heading: float, half_length: float, half_width: float
) -> np.ndarray:
    """Corners of an oriented rectangle in counter-clockwise order, shape (4, 2)."""
    c, s = math.cos(heading), math.sin(heading)
    forward = np.array([c, s]) * half_length
    left = np.array([-s, c]) * half_width
    center = np.array([x, y])
    return np.array(
        [
            center + forward + left,
            center - forward + left,
            center - forward - left,
            center + forward - left,
        ]
    )
