from pathlib import Path
from typing import List, Optional

import pytest

from advbench.core.errors import ConfigurationError
from advbench.harness.config import (
    canonical_value,
    coerce,
    load_experiment_config,
    parse_experiment_config,
)
from advbench.policies.registry import PolicyKind
from advbench.rewards import ObjectiveKind

PRESETS = Path(__file__).parent.parent / "presets"

MINIMAL = """
track.file = tracks/arena.trk
subject.kind = potential_field
objective.kind = direct_collision
"""


def parse(text: str = MINIMAL, **overrides):
    return parse_experiment_config(text, base_dir=PRESETS, overrides=overrides or None)


class TestCoerce:
    """String values to field types."""

    def test_scalars(self):
        assert coerce("12", int) == 12
        assert coerce(" 0.5 ", float) == 0.5
        assert coerce("yes", bool) is True
        assert coerce("Off", bool) is False
        assert coerce("null", PolicyKind) == PolicyKind.null

    def test_optional_and_lists(self):
        assert coerce("none", Optional[float]) is None
        assert coerce("2.5", Optional[float]) == 2.5
        assert coerce("64, 32", List[int]) == [64, 32]

    def test_bad_boolean(self):
        with pytest.raises(ValueError):
            coerce("maybe", bool)

    def test_canonical_values(self):
        assert canonical_value(None) == "none"
        assert canonical_value(True) == "true"
        assert canonical_value(ObjectiveKind.induced_collision) == "induced_collision"
        assert canonical_value([64, 64]) == "64, 64"
        assert canonical_value(0.1) == "0.1"


class TestParse:
    """Config text to an experiment."""

    def test_defaults(self):
        config = parse()
        assert config.subject.kind == PolicyKind.potential_field
        assert config.objective.kind == ObjectiveKind.direct_collision
        assert config.repetitions == 100
        assert config.ddpg.hidden_sizes == [64, 64]
        assert config.ddpg.reward_scale == 1.0
        assert config.ddpg.max_grad_norm is None
        assert config.track_file == PRESETS / "tracks" / "arena.trk"

    def test_run_seeds(self):
        config = parse(**{"experiment.base_seed": "7"})
        assert config.run_seed(0) == 7
        assert config.run_seed(3) == 10
        assert config.ddpg_for_run(3).seed == 10

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError, match="ddpg.learning_rate"):
            parse(MINIMAL + "ddpg.learning_rate = 0.1\n")

    def test_seed_is_not_settable(self):
        with pytest.raises(ConfigurationError, match="ddpg.seed"):
            parse(MINIMAL + "ddpg.seed = 3\n")

    def test_bad_value(self):
        with pytest.raises(ConfigurationError, match="ddpg.batch_size"):
            parse(MINIMAL + "ddpg.batch_size = many\n")

    def test_invalid_setting(self):
        with pytest.raises(ConfigurationError):
            parse(MINIMAL + "ddpg.gamma = 1.5\n")
        with pytest.raises(ConfigurationError):
            parse(MINIMAL + "experiment.repetitions = 0\n")

    def test_track_required(self):
        with pytest.raises(ConfigurationError, match="track.file"):
            parse("objective.kind = direct_collision\n")

    def test_missing_track(self):
        with pytest.raises(ConfigurationError, match="does not exist"):
            parse("track.file = tracks/nowhere.trk\n")

    def test_learned_subject_needs_checkpoint(self):
        with pytest.raises(ConfigurationError, match="checkpoint"):
            parse(**{"subject.kind": "learned"})


class TestConfigHash:
    """Content digest of the resolved config."""

    def test_ignores_layout(self):
        shuffled = (
            "# same experiment\n"
            "objective.kind = direct_collision   # head-on\n"
            "subject.kind = potential_field\n"
            "track.file = tracks/arena.trk\n"
            "ddpg.gamma = 0.99\n"
        )
        assert parse().config_hash == parse(shuffled).config_hash

    def test_changes_with_values(self):
        base = parse()
        assert parse(**{"ddpg.gamma": "0.9"}).config_hash != base.config_hash
        assert parse(**{"experiment.base_seed": "1"}).config_hash != base.config_hash

    def test_ignores_execution_settings(self):
        base = parse()
        moved = parse(**{"experiment.workers": "4", "experiment.output": "elsewhere"})
        assert moved.experiment.workers == 4
        assert moved.config_hash == base.config_hash
        assert moved.values == base.values
        assert "experiment.workers" not in moved.canonical
        assert "experiment.output" not in moved.canonical

    def test_changes_with_track_contents(self, tmp_path):
        for name, halfwidth in (("a", "30"), ("b", "25")):
            (tmp_path / name).mkdir()
            text = (PRESETS / "tracks" / "arena.trk").read_text().replace(
                "halfwidth 30", f"halfwidth {halfwidth}"
            )
            (tmp_path / name / "t.trk").write_text(text)
        a = parse_experiment_config("track.file = t.trk\n", base_dir=tmp_path / "a")
        b = parse_experiment_config("track.file = t.trk\n", base_dir=tmp_path / "b")
        assert a.config_hash != b.config_hash

    def test_canonical_text_sorted(self):
        lines = parse().canonical.splitlines()
        assert lines == sorted(lines)
        assert "subject.kind = potential_field" in lines


class TestPresets:
    """Shipped experiment configs."""

    @pytest.mark.parametrize(
        "name", sorted(p.name for p in PRESETS.glob("*.cfg"))
    )
    def test_loads(self, name):
        config = load_experiment_config(PRESETS / name)
        assert config.source == PRESETS / name
        assert config.load_track().half_width > 0

    def test_direct_null(self):
        config = load_experiment_config(PRESETS / "direct_null.cfg")
        assert config.repetitions == 10
        assert config.subject.kind == PolicyKind.null
        assert config.objective.c_prime == 200.0
        assert config.convergence.window == 50
        assert config.ddpg.reward_scale == 0.01
        assert config.ddpg.max_grad_norm == 10.0
        assert config.output_dir(None) == Path("results") / "direct_null"
        assert config.output_dir("elsewhere") == Path("elsewhere")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_experiment_config(tmp_path / "absent.cfg")
