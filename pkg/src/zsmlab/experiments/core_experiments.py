"""Base experiment class, metric/verdict schemas and the experiment registry."""

from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field

from zsmlab.config import ZsmSettings
from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import UnknownExperimentError
from zsmlab.core.experiment import SCHEMA_VERSION, ExperimentConfig
from zsmlab.core.io import write_table_csv

MetricMode = Literal["abs", "rel", "max", "min"]


class Metric(BaseModel):
    """One acceptance number.

    abs: |value - target| <= tolerance
    rel: |value - target| <= tolerance * |target|
    max: value <= tolerance
    min: value >= tolerance
    """

    value: float
    tolerance: float
    mode: MetricMode
    target: float | None = None
    passed: bool

    @classmethod
    def check(cls, value: float, tolerance: float, mode: MetricMode = "max", target: float | None = None) -> "Metric":
        value = float(value)
        if mode in ("abs", "rel") and target is None:
            raise ValueError(f"{mode} metric needs a target")
        if not math.isfinite(value):
            passed = False
        elif mode == "abs":
            passed = abs(value - target) <= tolerance
        elif mode == "rel":
            passed = abs(value - target) <= tolerance * abs(target)
        elif mode == "max":
            passed = value <= tolerance
        else:
            passed = value >= tolerance
        return cls(value=value, tolerance=float(tolerance), mode=mode, target=target, passed=bool(passed))

    @classmethod
    def flag(cls, ok: bool) -> "Metric":
        """A boolean check stored as 1.0 / 0.0 that must be 1."""
        return cls.check(1.0 if ok else 0.0, 1.0, "min")


class ExperimentVerdict(BaseModel):
    schema_version: Literal[1] = SCHEMA_VERSION
    experiment: str
    passed: bool
    metrics: dict[str, Metric]
    artifacts: list[str] = Field(default_factory=list)
    wall_seconds: float
    config_hash: str
    seed: int


class PlotSeries(BaseModel):
    y: str
    label: str


class PlotSpec(BaseModel):
    """Declarative plot manifest entry; columns refer to the CSV header."""

    file: str
    x: str
    series: list[PlotSeries]
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    log_x: bool = False
    log_y: bool = False


@dataclass
class ExperimentContext:
    config: ExperimentConfig
    out_dir: Path
    settings: ZsmSettings
    threads: int = 1
    artifacts: list[str] = field(default_factory=list)
    plots: list[PlotSpec] = field(default_factory=list)

    @property
    def constants(self) -> PhysicalConstants:
        return self.config.constants.build()

    @property
    def seed(self) -> int:
        return self.config.seed

    def wants(self, output: str) -> bool:
        """Config outputs, with binary dumps also gated by ZSM_WRITE_BINARY."""
        if output == "binary" and not self.settings.write_binary:
            return False
        return self.config.wants(output)

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def record(self, path: Path) -> Path:
        rel = path.relative_to(self.out_dir).as_posix() if path.is_relative_to(self.out_dir) else str(path)
        if rel not in self.artifacts:
            self.artifacts.append(rel)
        return path

    def write_table(self, name: str, header: list[str], rows: Any) -> Path:
        return self.record(write_table_csv(self.path(name), header, np.asarray(rows, dtype=float)))

    def write_json(self, name: str, data: Any) -> Path:
        path = self.path(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=True) + "\n")
        return self.record(path)

    def add_plot(self, file: str, x: str, series: dict[str, str], **labels: Any) -> None:
        spec = PlotSpec(file=file, x=x, series=[PlotSeries(y=y, label=label) for y, label in series.items()], **labels)
        self.plots.append(spec)


# Registry: name -> Experiment class (populated by Experiment.__init_subclass__)
ALL_EXPERIMENTS: dict[str, type[Experiment]] = {}


class Experiment(ABC):
    """A named, reproducible pipeline with acceptance metrics."""

    name: str = ""
    anchor: str = ""
    summary: str = ""

    def __init_subclass__(cls, **kwargs: Any) -> None:
        super().__init_subclass__(**kwargs)
        if cls.name:
            ALL_EXPERIMENTS[cls.name] = cls

    @classmethod
    def defaults(cls) -> ExperimentConfig:
        return ExperimentConfig()

    @abstractmethod
    def run(self, ctx: ExperimentContext) -> dict[str, Metric]:
        """Execute the pipeline, writing artifacts through ctx. Return the metrics."""
        ...

    @classmethod
    def describe(cls) -> str:
        return f"{cls.name}\n  reproduces: {cls.anchor}\n  {cls.summary}"


def experiment_names() -> list[str]:
    return sorted(ALL_EXPERIMENTS.keys())


def get_experiment(name: str) -> type[Experiment]:
    try:
        return ALL_EXPERIMENTS[name]
    except KeyError:
        raise UnknownExperimentError(name, experiment_names()) from None
