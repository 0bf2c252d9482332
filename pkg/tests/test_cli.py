import json
import sys

import pytest

from advbench._version import __version__
from advbench.cli import cli
from advbench.core.config import CONFIG_ENV, get_config
from advbench.commands.configure import LOGGING_SECTION

from tests.test_harness import result, write_config, write_experiment


@pytest.fixture(autouse=True)
def user_config(tmp_path, monkeypatch):
    path = tmp_path / "user" / "config"
    monkeypatch.setenv(CONFIG_ENV, str(path))
    return path


@pytest.fixture
def run(monkeypatch, capsys):
    def invoke(*args):
        monkeypatch.setattr(sys, "argv", ["advbench", *map(str, args)])
        code = 0
        try:
            cli()
        except SystemExit as exc:
            code = exc.code
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


@pytest.fixture
def experiments(tmp_path):
    a = write_experiment(tmp_path / "a", [result("null", 0, ttc=2.0), result("null", 1, ttc=4.0)])
    b = write_experiment(
        tmp_path / "b",
        [result("receding_horizon", 0, ttc=3.0), result("receding_horizon", 1, ttc=5.0)],
    )
    return a, b


class TestCli:
    """Command line entry point."""

    def test_version(self, run):
        code, out, _ = run("version")
        assert code == 0
        assert json.loads(out)[0]["advbench"] == __version__

    def test_compare(self, run, experiments, tmp_path):
        a, b = experiments
        code, out, _ = run("compare", a, b, "--out", tmp_path / "cmp")
        assert code == 0
        assert out.startswith("Experiment Results - Averaged over 2 runs")
        assert "receding_horizon: more resilient to direct collisions (time to collision)" in out
        assert (tmp_path / "cmp" / "comparison.txt").read_text().rstrip("\n") == out.rstrip("\n")

    def test_report(self, run, experiments):
        a, _ = experiments
        code, out, _ = run("report", a)
        assert code == 0
        assert json.loads(out)[0]["subject"] == "null"
        assert (a / "aggregate.csv").is_file()

    def test_missing_results(self, run, tmp_path):
        code, _, err = run("report", tmp_path)
        assert code == 1
        assert err.splitlines()[-1].startswith("error:")

    def test_config_required(self, run):
        code, _, err = run("bench")
        assert code == 1
        assert "--config is required" in err.splitlines()[-1]

    def test_unknown_command(self, run):
        code, _, _ = run("fly")
        assert code != 0

    def test_version_accepts_common_options(self, run, tmp_path):
        code, out, _ = run("version", "--config", tmp_path / "absent.cfg", "--seed", 9, "--out", tmp_path)
        assert code == 0
        assert json.loads(out)[0]["advbench"] == __version__

    def test_logging_flags(self, run):
        code, _, _ = run("--verbose", "version")
        assert code == 0


class TestConfigure:
    """User configuration commands."""

    def test_logging_defaults(self, run, user_config):
        code, out, _ = run("configure", "logging", "defaults", "debug", "--status", "true")
        assert code == 0
        assert json.loads(out) == [{"option": "debug", "status": "true"}]
        assert get_config()[LOGGING_SECTION]["debug"] == "true"

    def test_logging_list(self, run, user_config):
        code, out, _ = run("configure", "logging", "list")
        assert code == 0
        listed = {row["option"]: row["status"] for row in json.loads(out)}
        assert listed["warning"] == "true"
        assert listed["trace"] == "false"
        assert user_config.is_file()

    def test_accepts_common_options(self, run, tmp_path):
        code, out, _ = run(
            "configure", "logging", "list", "--config", tmp_path / "x.cfg", "--seed", 1, "--out", tmp_path
        )
        assert code == 0
        assert {row["option"] for row in json.loads(out)} >= {"warning", "trace"}
        code, _, _ = run(
            "configure", "logging", "defaults", "verbose", "--status", "false", "--seed", 2, "--out", tmp_path
        )
        assert code == 0


class TestTrainAndEvaluate:
    """Single runs from the command line."""

    def test_train_then_eval(self, run, tmp_path):
        config = write_config(tmp_path)
        out = tmp_path / "single"
        code, trained, _ = run("train", "--config", config, "--out", out, "--run", 1)
        assert code == 0
        assert json.loads(trained)[0]["seed"] == 4
        assert (out / "actor_1.ckpt").is_file()

        code, evaluated, _ = run(
            "eval", out / "actor_1.ckpt", "--config", config, "--episodes", 2, "--out", out
        )
        assert code == 0
        assert json.loads(evaluated)[0]["episodes"] == 2
        assert (out / "trace_eval.jsonl").is_file()

    def test_capacity(self, run, tmp_path):
        config = write_config(tmp_path)
        code, out, _ = run(
            "capacity", "--config", config, "--max-traffic", 1, "--trials", 2, "--out", tmp_path
        )
        assert code == 0
        assert "capacity threshold:" in out
        assert (tmp_path / "capacity.csv").is_file()
