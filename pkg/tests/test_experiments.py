from __future__ import annotations

import json
from pathlib import Path

import pytest

from zsmlab.config import ZsmSettings
from zsmlab.core.errors import UnknownExperimentError
from zsmlab.experiments import ALL_EXPERIMENTS, Metric, experiment_names, get_experiment, run_experiment

FAST = ["ring-spectrum", "superposition-singlevalue", "bohr-table", "frequency-shifts"]


@pytest.fixture()
def settings(tmp_path: Path) -> ZsmSettings:
    return ZsmSettings(out_dir=str(tmp_path / "runs"), write_binary=False)


def test_registry_lists_every_experiment() -> None:
    names = experiment_names()
    assert len(names) >= 12
    assert names == sorted(ALL_EXPERIMENTS)
    for name in ["wallstrom-gate", "equivariance-free-gaussian", "variational-stationarity", "stationary-node-avoidance"]:
        assert name in names


def test_describe_names_the_anchor() -> None:
    text = get_experiment("ring-spectrum").describe()
    assert text.startswith("ring-spectrum")
    assert "Eq. 28" in text


def test_unknown_experiment() -> None:
    with pytest.raises(UnknownExperimentError):
        get_experiment("no-such-experiment")


def test_metric_modes() -> None:
    assert Metric.check(0.5, 1.0).passed
    assert not Metric.check(2.0, 1.0).passed
    assert Metric.check(2.0, 1.0, "min").passed
    assert Metric.check(1.05, 0.1, "rel", 1.0).passed
    assert not Metric.check(float("nan"), 1.0).passed
    assert Metric.flag(True).passed
    with pytest.raises(ValueError):
        Metric.check(1.0, 0.1, "abs")


@pytest.mark.parametrize("name", FAST)
def test_fast_experiment_passes(name: str, tmp_path: Path, settings: ZsmSettings) -> None:
    out = tmp_path / name
    verdict = run_experiment(name, out_dir=out, settings=settings)
    failed = sorted(key for key, metric in verdict.metrics.items() if not metric.passed)
    assert verdict.passed, failed

    data = json.loads((out / "verdict.json").read_text())
    assert data["experiment"] == name
    assert data["schema_version"] == 1
    assert data["passed"] is True
    for artifact in data["artifacts"]:
        assert (out / artifact).exists(), artifact
    assert (out / "verdict.schema.json").exists()
    assert (out / "config.json").exists()


def test_seed_and_config_override(tmp_path: Path, settings: ZsmSettings) -> None:
    config = tmp_path / "ring.toml"
    config.write_text("schema = 1\n[params]\nn_max = 2\n")
    verdict = run_experiment("ring-spectrum", config_path=config, out_dir=tmp_path / "run", seed=7, settings=settings)
    assert verdict.seed == 7
    assert "energy_n2" in verdict.metrics
    assert "energy_n3" not in verdict.metrics

    again = run_experiment("ring-spectrum", config_path=config, out_dir=tmp_path / "again", seed=7, settings=settings)
    assert again.config_hash == verdict.config_hash


def test_plot_manifest_points_at_csv_columns(tmp_path: Path, settings: ZsmSettings) -> None:
    out = tmp_path / "plots"
    run_experiment("ring-spectrum", out_dir=out, settings=settings)
    plots = json.loads((out / "plots.json").read_text())
    assert plots
    header = (out / plots[0]["file"]).read_text().splitlines()[0].split(",")
    assert plots[0]["x"] in header
    for series in plots[0]["series"]:
        assert series["y"] in header
