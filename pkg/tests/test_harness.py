import json
from pathlib import Path

import pytest

from advbench.core.errors import ConfigurationError
from advbench.harness import runner
from advbench.harness.config import load_experiment_config
from advbench.harness.manifest import (
    MANIFEST_FILE,
    RunManifest,
    RunStatus,
    load_manifest,
    save_manifest,
)
from advbench.harness.plots import curve_svg, histogram_svg
from advbench.harness.report import AGGREGATE_FILE, HISTOGRAM_FILE, build_report, compare_dirs
from advbench.harness.runner import (
    RESULTS_FILE,
    evaluation_seeds,
    load_results,
    run_capacity,
    run_experiment,
)
from advbench.metrics.records import BenchmarkResult, TrainingRecord
from advbench.pandas.results import read_results_csv, results_frame, write_results_csv

ARENA = Path(__file__).parent.parent / "presets" / "tracks" / "arena.trk"

TINY_CONFIG = f"""
experiment.name = tiny
experiment.repetitions = 2
experiment.base_seed = 3
experiment.eval_episodes = 2
track.file = {ARENA}
subject.kind = potential_field
objective.kind = direct_collision
scenario.step_limit = 15
ddpg.episodes_max = 3
ddpg.warmup_steps = 10
ddpg.batch_size = 8
ddpg.buffer_capacity = 200
ddpg.hidden_sizes = 8
convergence.window = 2
convergence.min_episodes = 0
"""


def write_config(directory: Path, extra: str = "") -> Path:
    path = directory / "tiny.cfg"
    path.write_text(TINY_CONFIG + extra, encoding="utf-8")
    return path


@pytest.fixture
def tiny_config(tmp_path):
    return load_experiment_config(write_config(tmp_path))


@pytest.fixture
def finished(tmp_path, tiny_config):
    return run_experiment(tiny_config, tmp_path / "out")


def result(subject="null", run=0, converged=20, ttc=5.0, **kwargs):
    values = dict(
        subject=subject,
        objective="direct_collision",
        seed=run,
        episodes_to_convergence=converged,
        optimal_return=100.0,
        time_to_collision=ttc,
        distance_to_collision=40.0 if ttc is not None else None,
        damage_target=10.0,
        damage_adversary=10.0,
        success_rate=1.0,
        episodes_trained=50,
        run=run,
    )
    values.update(kwargs)
    return BenchmarkResult(**values)


def write_experiment(directory: Path, results):
    directory.mkdir(parents=True, exist_ok=True)
    save_manifest(RunManifest(config_hash="0" * 64, name=directory.name), directory)
    write_results_csv(results, directory / RESULTS_FILE)
    return directory


class TestResultsCsv:
    """Per-run result tables."""

    def test_null_subject_and_missing_metrics(self, tmp_path):
        results = [
            result(run=1, converged=None, ttc=None, optimal_return=0.1 + 0.2),
            result(run=0),
        ]
        path = write_results_csv(results, tmp_path / RESULTS_FILE)
        loaded = read_results_csv(path)
        assert [r.run for r in loaded] == [0, 1]
        assert loaded[0].subject == "null"
        assert loaded[1].episodes_to_convergence is None
        assert loaded[1].time_to_collision is None
        assert loaded[1].optimal_return == 0.1 + 0.2
        assert loaded[0] == results[1]

    def test_column_order(self):
        frame = results_frame([result()])
        assert list(frame.columns[:4]) == ["run", "seed", "subject", "objective"]


class TestManifest:
    """Run manifests on disk."""

    def test_absent(self, tmp_path):
        assert load_manifest(tmp_path) is None

    def test_unreadable(self, tmp_path):
        (tmp_path / MANIFEST_FILE).write_text("{not json")
        with pytest.raises(ConfigurationError):
            load_manifest(tmp_path)

    def test_describes_experiment(self, tiny_config):
        manifest = runner.new_manifest(tiny_config)
        assert manifest.config_hash == tiny_config.config_hash
        assert manifest.seeds == [3, 4]
        assert manifest.components["subject"] == "potential_field"
        assert manifest.components["environment"] == "2D kinematic simulator, 2 vehicles"
        assert manifest.components["reward"] == "eta * 200.0 - d(target, adversary)"
        assert manifest.runs[1].artifacts["checkpoint"] == "actor_1.ckpt"
        assert manifest.config["subject.kind"] == "potential_field"


class TestEvaluationSeeds:
    """Evaluation layouts per run."""

    def test_deterministic_and_distinct(self):
        assert evaluation_seeds(3, 4) == evaluation_seeds(3, 4)
        assert evaluation_seeds(3, 4) != evaluation_seeds(4, 4)
        assert len(set(evaluation_seeds(3, 20))) == 20


class TestRunExperiment:
    """Repeated train-then-evaluate runs."""

    def test_outputs(self, finished):
        out = finished.out_dir
        assert [r.run for r in finished.results] == [0, 1]
        assert [r.seed for r in finished.results] == [3, 4]
        assert all(r.subject == "potential_field" for r in finished.results)
        assert all(r.episodes_trained <= 3 for r in finished.results)
        for entry in finished.manifest.runs:
            assert entry.status == RunStatus.completed
            for name in entry.artifacts.values():
                assert (out / name).is_file()
        manifest = load_manifest(out)
        assert manifest.completed() == finished.manifest.completed()
        _, loaded = load_results(out)
        assert loaded == finished.results

    def test_record_file(self, finished):
        entry = finished.manifest.run(0)
        text = (finished.out_dir / entry.artifacts["record"]).read_text()
        record = TrainingRecord.from_dict(json.loads(text))
        assert record.seed == 3
        assert len(record) == finished.results[0].episodes_trained

    def test_repeatable(self, tmp_path, finished, tiny_config):
        again = run_experiment(tiny_config, tmp_path / "again")
        first = (finished.out_dir / RESULTS_FILE).read_bytes()
        assert (again.out_dir / RESULTS_FILE).read_bytes() == first
        for name in ("actor_0.ckpt", "actor_1.ckpt"):
            assert (again.out_dir / name).read_bytes() == (finished.out_dir / name).read_bytes()

    def test_workers_match_sequential(self, tmp_path, finished, tiny_config):
        parallel = run_experiment(tiny_config, tmp_path / "parallel", workers=2)
        assert parallel.results == finished.results

    def test_resume_skips_completed(self, finished, tiny_config, monkeypatch):
        def fail(*args, **kwargs):
            raise AssertionError("completed run executed again")

        monkeypatch.setattr(runner, "execute_run", fail)
        resumed = run_experiment(tiny_config, finished.out_dir)
        assert resumed.results == finished.results

    def test_resume_retries_failed(self, finished, tiny_config, monkeypatch):
        manifest = load_manifest(finished.out_dir)
        manifest.run(1).status = RunStatus.failed
        save_manifest(manifest, finished.out_dir)
        executed = []
        real = runner.execute_run

        def counting(config, index, out_dir):
            executed.append(index)
            return real(config, index, out_dir)

        monkeypatch.setattr(runner, "execute_run", counting)
        resumed = run_experiment(tiny_config, finished.out_dir)
        assert executed == [1]
        assert resumed.results == finished.results

    def test_resume_with_other_worker_count(self, tmp_path, finished, monkeypatch):
        parallel = load_experiment_config(write_config(tmp_path, "experiment.workers = 2\n"))
        assert parallel.config_hash == finished.manifest.config_hash

        def fail(*args, **kwargs):
            raise AssertionError("completed run executed again")

        monkeypatch.setattr(runner, "execute_run", fail)
        resumed = run_experiment(parallel, finished.out_dir)
        assert resumed.results == finished.results
        assert load_manifest(finished.out_dir).config == finished.manifest.config

    def test_different_config_rejected(self, tmp_path, finished):
        other = load_experiment_config(write_config(tmp_path, "ddpg.gamma = 0.9\n"))
        with pytest.raises(ConfigurationError):
            run_experiment(other, finished.out_dir)

    def test_divergence_marks_run_failed(self, tmp_path, tiny_config, monkeypatch):
        def diverging(config, index, out_dir):
            return runner.RunOutcome(index, config.run_seed(index), error="diverged")

        monkeypatch.setattr(runner, "execute_run", diverging)
        outcome = run_experiment(tiny_config, tmp_path / "failed")
        assert outcome.results == []
        assert [r.index for r in outcome.manifest.failed()] == [0, 1]
        assert load_manifest(outcome.out_dir).run(0).error == "diverged"


class TestReport:
    """Aggregates and plots of finished experiments."""

    def test_aggregate_only(self, tmp_path):
        out = write_experiment(tmp_path / "null", [result(run=0, ttc=4.0), result(run=1, ttc=6.0)])
        files = build_report(out)
        assert files.files == [str(out / AGGREGATE_FILE)]
        assert files.aggregate.subject == "null"
        assert files.aggregate.mean("time_to_collision") == 5.0
        assert "time_to_collision_mean" in (out / AGGREGATE_FILE).read_text()

    def test_plots(self, finished):
        files = build_report(finished.out_dir, plots=True)
        names = {Path(f).name for f in files.files}
        assert {AGGREGATE_FILE, HISTOGRAM_FILE, "curve_0.svg", "curve_1.svg"} <= names
        assert (finished.out_dir / HISTOGRAM_FILE).read_text().startswith("<svg")

    def test_compare(self, tmp_path):
        a = write_experiment(tmp_path / "a", [result("null", 0, ttc=2.0), result("null", 1, ttc=4.0)])
        b = write_experiment(
            tmp_path / "b",
            [result("potential_field", 0, ttc=8.0), result("potential_field", 1, ttc=10.0)],
        )
        report = compare_dirs(a, b)
        text = report.render()
        assert "Averaged over 2 runs" in text
        assert "3.00s" in text and "9.00s" in text
        assert "potential_field: more resilient to direct collisions (time to collision)" in report.labels

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_results(tmp_path)


class TestPlots:
    """SVG rendering."""

    def test_curve(self):
        record = TrainingRecord(returns=[float(i) for i in range(10)], steps=[1] * 10, successes=[False] * 10)
        svg = curve_svg(record, window=3)
        assert svg.startswith("<svg")
        assert "mean of last 3" in svg

    def test_short_curve_has_no_mean(self):
        record = TrainingRecord(returns=[1.0], steps=[1], successes=[False])
        assert "mean of last" not in curve_svg(record, window=3)

    def test_empty_histogram(self):
        assert histogram_svg([]).startswith("<svg")


class TestCapacity:
    """Traffic capacity scans."""

    def test_rates(self, tiny_config):
        rates, threshold = run_capacity(tiny_config, [0, 1], trials=2)
        assert sorted(rates) == [0, 1]
        assert all(0.0 <= rate <= 1.0 for rate in rates.values())
        assert threshold is None or threshold in rates
