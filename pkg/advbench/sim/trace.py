"""JSON-lines episode traces."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, List, Optional, Union

from dataclasses_json import dataclass_json

from advbench.sim.collisions import CollisionEvent
from advbench.sim.world import WorldState

log = logging.getLogger(__name__)


@dataclass_json
@dataclass(frozen=True)
class TraceVehicle:
    id: str
    x: float
    y: float
    heading: float
    speed: float
    damage: float


@dataclass_json
@dataclass(frozen=True)
class TraceFrame:
    """One simulator step as written to a trace file."""

    step: int
    time: float
    vehicles: List[TraceVehicle] = field(default_factory=list)
    collisions: List[CollisionEvent] = field(default_factory=list)
    episode: int = 0

    @classmethod
    def from_world(cls, world: WorldState, episode: int = 0) -> "TraceFrame":
        return cls(
            step=world.step_index,
            time=world.sim_time,
            vehicles=[
                TraceVehicle(
                    id=entry.vehicle_id,
                    x=entry.state.position.x,
                    y=entry.state.position.y,
                    heading=entry.state.heading,
                    speed=entry.state.speed_longitudinal,
                    damage=entry.state.damage,
                )
                for entry in world.vehicles.values()
            ],
            collisions=list(world.collisions_this_step),
            episode=episode,
        )

    def vehicle(self, vehicle_id: str) -> Optional[TraceVehicle]:
        return next((v for v in self.vehicles if v.id == vehicle_id), None)

    def to_line(self) -> str:
        return json.dumps(self.to_dict(encode_json=True), separators=(",", ":"))


def write_trace(frames: Iterable[TraceFrame], fp: IO[str]):
    """Write frames, one JSON object per line."""
    for frame in frames:
        fp.write(frame.to_line())
        fp.write("\n")


def save_trace(frames: Iterable[TraceFrame], path: Union[str, Path]):
    with Path(path).open("w", encoding="utf-8") as fp:
        write_trace(frames, fp)


def read_trace(path: Union[str, Path]) -> List[TraceFrame]:
    """Read every frame of a trace file."""
    log.debug(f"Reading trace {path}...")
    with Path(path).open("r", encoding="utf-8") as fp:
        return [TraceFrame.from_dict(json.loads(line)) for line in fp if line.strip()]


def split_episodes(frames: Iterable[TraceFrame]) -> List[List[TraceFrame]]:
    """Group consecutive frames by their episode field."""
    episodes: List[List[TraceFrame]] = []
    for frame in frames:
        if not episodes or episodes[-1][-1].episode != frame.episode:
            episodes.append([])
        episodes[-1].append(frame)
    return episodes
