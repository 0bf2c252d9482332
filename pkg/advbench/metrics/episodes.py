"""Test-time metrics computed from episode traces."""

import math
from typing import Optional, Sequence, Tuple

from advbench.rewards import ObjectiveKind, success_event
from advbench.sim.trace import TraceFrame


def first_success_index(
    trace: Sequence[TraceFrame],
    target: str,
    adversary: str,
    kind: ObjectiveKind = ObjectiveKind.direct_collision,
) -> Optional[int]:
    for index, frame in enumerate(trace):
        if any(success_event(e, kind, target, adversary) for e in frame.collisions):
            return index
    return None


def time_to_collision(
    trace: Sequence[TraceFrame],
    target: str,
    adversary: str,
    kind: ObjectiveKind = ObjectiveKind.direct_collision,
) -> Optional[float]:
    """Simulated seconds until the objective's first success collision."""
    index = first_success_index(trace, target, adversary, kind)
    return None if index is None else trace[index].time


def distance_to_collision(
    trace: Sequence[TraceFrame],
    target: str,
    adversary: str,
    kind: ObjectiveKind = ObjectiveKind.direct_collision,
) -> Optional[float]:
    """Path length the target drove before the objective's first success collision."""
    index = first_success_index(trace, target, adversary, kind)
    if index is None:
        return None
    travelled = 0.0
    previous = trace[0].vehicle(target)
    for frame in trace[1 : index + 1]:
        current = frame.vehicle(target)
        travelled += math.hypot(current.x - previous.x, current.y - previous.y)
        previous = current
    return travelled


def damage_totals(
    trace: Sequence[TraceFrame], target: str, adversary: str
) -> Tuple[float, float]:
    """Final damage of target and adversary; a vehicle missing from the trace has none."""
    if not trace:
        return 0.0, 0.0
    last = trace[-1]
    totals = []
    for vehicle_id in (target, adversary):
        vehicle = last.vehicle(vehicle_id)
        totals.append(vehicle.damage if vehicle is not None else 0.0)
    return totals[0], totals[1]
