from __future__ import annotations

import json
from pathlib import Path

import pytest

from zsmlab.cli import EXIT_CONFIG, EXIT_PASS, EXIT_UNKNOWN, main


@pytest.fixture(autouse=True)
def _isolated_env(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("ZSM_OUT_DIR", str(tmp_path / "runs"))
    monkeypatch.setenv("ZSM_WRITE_BINARY", "0")


def test_list_prints_registered_names(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["list"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "ring-spectrum" in out
    assert "bohr-table" in out


def test_describe_unknown_experiment(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["describe", "zzz"]) == EXIT_UNKNOWN
    assert "zzz" in capsys.readouterr().err


def test_bad_config_reports_key_path(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    config = tmp_path / "bad.toml"
    config.write_text("schema = 1\n[grid]\nnodez = [8]\n")
    assert main(["run", "ring-spectrum", "--config", str(config)]) == EXIT_CONFIG
    assert "grid.nodez" in capsys.readouterr().err


def test_future_schema_is_a_config_error(tmp_path: Path) -> None:
    config = tmp_path / "future.json"
    config.write_text(json.dumps({"schema": 2}))
    assert main(["run", "ring-spectrum", "--config", str(config)]) == EXIT_CONFIG


def test_run_writes_verdict(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out = tmp_path / "bohr"
    assert main(["run", "bohr-table", "--out", str(out), "--seed", "3"]) == EXIT_PASS
    verdict = json.loads((out / "verdict.json").read_text())
    assert verdict["passed"] is True
    assert verdict["seed"] == 3
    assert "bohr-table: PASS" in capsys.readouterr().out


def test_default_out_dir_comes_from_env(tmp_path: Path) -> None:
    assert main(["run", "frequency-shifts"]) == EXIT_PASS
    assert (tmp_path / "runs" / "frequency-shifts" / "verdict.json").exists()
