"""Experiment configuration files.

A config file is flat ``key = value`` text with dotted section prefixes::

    # adversary vs. null subject
    experiment.repetitions = 10
    track.file = tracks/arena.trk
    subject.kind = null
    objective.kind = direct_collision
    ddpg.gamma = 0.99

Unset keys take the defaults of the dataclass behind each section.
"""

import configparser
import dataclasses
import hashlib
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union, get_args, get_origin, get_type_hints

from dataclasses_json import dataclass_json

from advbench.core.errors import ConfigurationError
from advbench.env import ScenarioConfig
from advbench.metrics.records import ConvergenceCriterion
from advbench.policies.observation import SensorConfig
from advbench.policies.registry import PolicySpec
from advbench.rewards import ObjectiveKind, ObjectiveSpec
from advbench.rl.ddpg import DdpgConfig
from advbench.sim.track import Track, load_track, load_waypoints
from advbench.sim.vehicle import VehicleSpec
from advbench.sim.world import PhysicsConfig

log = logging.getLogger(__name__)

ROOT_SECTION = "advbench"
TRUE_VALUES = {"true", "yes", "on", "1"}
FALSE_VALUES = {"false", "no", "off", "0"}
# how and where runs execute; left out of the config digest
EXECUTION_KEYS = frozenset({"experiment.workers", "experiment.output"})


@dataclass_json
@dataclass(frozen=True)
class ExperimentSettings:
    name: str = "experiment"
    repetitions: int = 100
    base_seed: int = 0
    eval_episodes: int = 20
    traffic_count: int = 0
    workers: int = 1
    output: Optional[str] = None

    def __post_init__(self):
        if self.repetitions < 1:
            raise ConfigurationError("experiment.repetitions must be >= 1")
        if self.eval_episodes < 1:
            raise ConfigurationError("experiment.eval_episodes must be >= 1")
        if self.traffic_count < 0:
            raise ConfigurationError("experiment.traffic_count must be >= 0")
        if self.workers < 1:
            raise ConfigurationError("experiment.workers must be >= 1")


@dataclass_json
@dataclass(frozen=True)
class TrackSettings:
    file: str = ""


@dataclass_json
@dataclass(frozen=True)
class ObjectiveSettings:
    """Objective keys as written in a config file; the reference path is a file."""

    kind: ObjectiveKind = ObjectiveKind.direct_collision
    c: float = 200.0
    c_prime: float = 200.0
    c_t: float = 200.0
    c_adv: float = 100.0
    reference_file: Optional[str] = None
    reference_dt: float = 0.05
    absolute_sin: bool = False


# DdpgConfig.seed is derived per run from experiment.base_seed
SECTIONS: Dict[str, Tuple[type, Tuple[str, ...]]] = {
    "experiment": (ExperimentSettings, ()),
    "track": (TrackSettings, ()),
    "sim": (PhysicsConfig, ()),
    "vehicle": (VehicleSpec, ()),
    "subject": (PolicySpec, ()),
    "objective": (ObjectiveSettings, ()),
    "ddpg": (DdpgConfig, ("seed",)),
    "convergence": (ConvergenceCriterion, ()),
    "sensor": (SensorConfig, ()),
    "scenario": (ScenarioConfig, ()),
}


def _settable_fields(cls: type, excluded: Tuple[str, ...]) -> Dict[str, Any]:
    hints = get_type_hints(cls)
    return {
        f.name: hints[f.name]
        for f in dataclasses.fields(cls)
        if f.init and f.name not in excluded
    }


def coerce(raw: str, annotation: Any) -> Any:
    """Convert a config string to ``annotation``."""
    raw = raw.strip()
    origin = get_origin(annotation)
    if origin is Union:
        if raw.lower() in ("", "none"):
            return None
        inner = [a for a in get_args(annotation) if a is not type(None)]
        return coerce(raw, inner[0])
    if origin in (list, List):
        (item,) = get_args(annotation)
        return [coerce(part, item) for part in raw.split(",") if part.strip()]
    if annotation is bool:
        lowered = raw.lower()
        if lowered in TRUE_VALUES:
            return True
        if lowered in FALSE_VALUES:
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if annotation is int:
        return int(raw)
    if annotation is float:
        return float(raw)
    if isinstance(annotation, type) and issubclass(annotation, Enum):
        return annotation(raw)
    return raw


def canonical_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(canonical_value(v) for v in value)
    return str(value)


def read_raw(text: str, source: str = "<config>") -> Dict[str, str]:
    """Parse ``key = value`` lines into a flat dict of dotted keys."""
    parser = configparser.ConfigParser(
        interpolation=None, delimiters=("=",), comment_prefixes=("#",), inline_comment_prefixes=("#",)
    )
    parser.optionxform = str
    try:
        parser.read_string(f"[{ROOT_SECTION}]\n{text}", source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from exc
    return dict(parser[ROOT_SECTION])


@dataclass
class ExperimentConfig:
    """Everything one experiment needs; per-run seeds are ``base_seed + run index``."""

    experiment: ExperimentSettings
    track_file: Path
    physics: PhysicsConfig
    vehicle: VehicleSpec
    subject: PolicySpec
    objective: ObjectiveSpec
    ddpg: DdpgConfig
    convergence: ConvergenceCriterion
    sensor: SensorConfig
    scenario: ScenarioConfig
    canonical: str = ""
    source: Optional[Path] = None
    values: Dict[str, str] = field(default_factory=dict)

    @property
    def repetitions(self) -> int:
        return self.experiment.repetitions

    @property
    def base_seed(self) -> int:
        return self.experiment.base_seed

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical.encode("utf-8")).hexdigest()

    def run_seed(self, index: int) -> int:
        return self.base_seed + index

    def ddpg_for_run(self, index: int) -> DdpgConfig:
        return dataclasses.replace(self.ddpg, seed=self.run_seed(index))

    def load_track(self) -> Track:
        return load_track(self.track_file)

    def output_dir(self, override: Optional[Union[str, Path]] = None) -> Path:
        if override is not None:
            return Path(override)
        if self.experiment.output:
            return self._resolve(self.experiment.output)
        return Path("results") / self.experiment.name

    def _resolve(self, value: str) -> Path:
        path = Path(value).expanduser()
        if not path.is_absolute() and self.source is not None:
            path = self.source.parent / path
        return path


def _build_section(
    name: str, raw: Mapping[str, str], source: str
) -> Tuple[Any, Dict[str, str]]:
    cls, excluded = SECTIONS[name]
    fields = _settable_fields(cls, excluded)
    kwargs = {}
    for key, annotation in fields.items():
        dotted = f"{name}.{key}"
        if dotted in raw:
            try:
                kwargs[key] = coerce(raw[dotted], annotation)
            except (ValueError, TypeError) as exc:
                raise ConfigurationError(f"{source}: {dotted}: {exc}") from exc
    section = cls(**kwargs)
    resolved = {f"{name}.{key}": canonical_value(getattr(section, key)) for key in fields}
    return section, resolved


def parse_experiment_config(
    text: str,
    base_dir: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, str]] = None,
    source: str = "<config>",
) -> ExperimentConfig:
    """
    Build an :class:`ExperimentConfig` from config text.

    Parameters
    ----------
    text : str
        Config file contents
    base_dir : Union[str, Path], optional
        Directory relative paths resolve against
    overrides : Mapping[str, str], optional
        Dotted keys replacing values from ``text`` (command-line flags)
    source : str
        Name used in error messages

    Returns
    -------
    ExperimentConfig

    Raises
    ------
    ConfigurationError
        Unknown key, unparsable value, invalid setting or missing file
    """
    raw = read_raw(text, source)
    raw.update({k: str(v) for k, v in (overrides or {}).items()})

    known = {
        f"{name}.{key}"
        for name, (cls, excluded) in SECTIONS.items()
        for key in _settable_fields(cls, excluded)
    }
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigurationError(f"{source}: unknown keys {', '.join(unknown)}")

    sections = {}
    resolved: Dict[str, str] = {}
    for name in SECTIONS:
        sections[name], values = _build_section(name, raw, source)
        resolved.update(values)

    root = Path(base_dir) if base_dir is not None else Path.cwd()

    def existing(value: str, key: str) -> Path:
        path = Path(value).expanduser()
        path = path if path.is_absolute() else root / path
        if not path.is_file():
            raise ConfigurationError(f"{source}: {key} {path} does not exist")
        return path

    track_settings: TrackSettings = sections["track"]
    if not track_settings.file:
        raise ConfigurationError(f"{source}: track.file is required")
    track_file = existing(track_settings.file, "track.file")
    resolved["track.sha256"] = hashlib.sha256(track_file.read_bytes()).hexdigest()

    settings: ObjectiveSettings = sections["objective"]
    reference = None
    if settings.reference_file:
        reference_file = existing(settings.reference_file, "objective.reference_file")
        reference = load_waypoints(reference_file)
        resolved["objective.reference_sha256"] = hashlib.sha256(
            reference_file.read_bytes()
        ).hexdigest()
    objective = ObjectiveSpec(
        kind=settings.kind,
        c=settings.c,
        c_prime=settings.c_prime,
        c_t=settings.c_t,
        c_adv=settings.c_adv,
        reference_trajectory=reference,
        reference_dt=settings.reference_dt,
        absolute_sin=settings.absolute_sin,
    )
    ddpg: DdpgConfig = sections["ddpg"].validate()

    resolved = {k: v for k, v in resolved.items() if k not in EXECUTION_KEYS}
    canonical = "".join(f"{key} = {resolved[key]}\n" for key in sorted(resolved))
    return ExperimentConfig(
        experiment=sections["experiment"],
        track_file=track_file,
        physics=sections["sim"],
        vehicle=sections["vehicle"],
        subject=_resolve_subject(sections["subject"], root),
        objective=objective,
        ddpg=ddpg,
        convergence=sections["convergence"],
        sensor=sections["sensor"],
        scenario=sections["scenario"],
        canonical=canonical,
        values=resolved,
    )


def _resolve_subject(spec: PolicySpec, root: Path) -> PolicySpec:
    if spec.checkpoint is None:
        return spec
    path = Path(spec.checkpoint).expanduser()
    if not path.is_absolute():
        path = root / path
    if not path.is_file():
        raise ConfigurationError(f"subject.checkpoint {path} does not exist")
    return dataclasses.replace(spec, checkpoint=str(path))


def load_experiment_config(
    path: Union[str, Path], overrides: Optional[Mapping[str, str]] = None
) -> ExperimentConfig:
    """Read and validate an experiment config file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"{path} does not exist...")
    log.debug(f"Loading experiment config {path}...")
    config = parse_experiment_config(
        path.read_text(encoding="utf-8"), path.parent, overrides, source=str(path)
    )
    config.source = path
    return config
