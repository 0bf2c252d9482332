import math

import pytest

from advbench.sim.geometry import Vec2
from advbench.sim.track import rectangle_track, ring_track
from advbench.sim.vehicle import VehicleSpec, VehicleState
from advbench.sim.world import PhysicsConfig, make_world


@pytest.fixture
def straight_track():
    """Rectangle whose first 200 m side runs along +x through the origin."""
    return rectangle_track(200.0, 120.0, 30.0)


@pytest.fixture
def ring():
    return ring_track(radius=50.0, half_width=15.0)


@pytest.fixture
def spec():
    return VehicleSpec()


@pytest.fixture
def physics():
    return PhysicsConfig(dt=0.1)


@pytest.fixture
def make_pair(straight_track, spec, physics):
    """World with vehicles ``a`` and ``b`` on the straight side."""

    def _make(a: VehicleState, b: VehicleState):
        return make_world(straight_track, [("a", a, spec), ("b", b, spec)], physics=physics)

    return _make


def at(x: float, y: float = 0.0, heading: float = 0.0, speed: float = 0.0) -> VehicleState:
    return VehicleState(position=Vec2(x, y), heading=heading, speed_longitudinal=speed)


def close(a: float, b: float, tol: float = 1e-9) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)
