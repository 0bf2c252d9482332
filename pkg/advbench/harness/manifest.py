"""Run manifests: what ran, with which seeds, and where its artifacts are."""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Union

from dataclasses_json import dataclass_json

from advbench._version import __version__
from advbench.core.errors import ConfigurationError

log = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"


class RunStatus(str, Enum):
    pending = "pending"
    completed = "completed"
    failed = "failed"


@dataclass_json
@dataclass
class RunEntry:
    """One repetition; artifact paths are relative to the output directory."""

    index: int
    seed: int
    status: RunStatus = RunStatus.pending
    artifacts: Dict[str, str] = field(default_factory=dict)
    error: Optional[str] = None


@dataclass_json
@dataclass
class RunManifest:
    """
    Content digest of the canonical config, per-run seeds and artifacts.

    ``components`` names the framework pieces of the experiment: environment,
    objective and reward, learning model, exploration, and the metrics.
    """

    config_hash: str
    version: str = __version__
    name: str = "experiment"
    components: Dict[str, str] = field(default_factory=dict)
    config: Dict[str, str] = field(default_factory=dict)
    runs: List[RunEntry] = field(default_factory=list)

    def run(self, index: int) -> RunEntry:
        return next(r for r in self.runs if r.index == index)

    @property
    def seeds(self) -> List[int]:
        return [r.seed for r in self.runs]

    def completed(self) -> List[RunEntry]:
        return [r for r in self.runs if r.status == RunStatus.completed]

    def failed(self) -> List[RunEntry]:
        return [r for r in self.runs if r.status == RunStatus.failed]

    def to_text(self) -> str:
        return json.dumps(self.to_dict(encode_json=True), indent=2, sort_keys=True) + "\n"


def save_manifest(manifest: RunManifest, out_dir: Union[str, Path]) -> Path:
    path = Path(out_dir) / MANIFEST_FILE
    path.write_text(manifest.to_text(), encoding="utf-8")
    log.debug(f"Wrote manifest {path}...")
    return path


def load_manifest(out_dir: Union[str, Path]) -> Optional[RunManifest]:
    """Manifest in ``out_dir``, ``None`` when there is none yet."""
    path = Path(out_dir) / MANIFEST_FILE
    if not path.exists():
        return None
    try:
        return RunManifest.from_dict(json.loads(path.read_text(encoding="utf-8")))
    except (ValueError, KeyError) as exc:
        raise ConfigurationError(f"{path}: unreadable manifest: {exc}") from exc
