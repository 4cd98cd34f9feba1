"""Experiment configuration schema (schema = 1) and loaders."""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Literal

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 fallback with identical API
    import tomli as tomllib

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, field_validator

from zsmlab.core.constants import PhysicalConstants, make_constants
from zsmlab.core.errors import ConfigError
from zsmlab.core.grid import Grid, disk_grid, line_grid, plane_grid, ring_grid
from zsmlab.core.potentials import Potentials, coulomb, free, harmonic, uniform_magnetic

SCHEMA_VERSION = 1
SEED_LIMIT = 2**64

BoundaryName = Literal["periodic", "reflecting", "absorbing"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ConstantsConfig(_Strict):
    unit_system: Literal["natural", "SI"] = "natural"
    overrides: dict[str, float] = Field(default_factory=dict)

    def build(self) -> PhysicalConstants:
        return make_constants(self.unit_system, self.overrides)


class GridConfig(_Strict):
    topology: Literal["line", "ring", "plane", "disk-polar"] = "line"
    nodes: list[int] = Field(default_factory=lambda: [256], min_length=1, max_length=2)
    extents: list[tuple[float, float]] = Field(default_factory=lambda: [(-10.0, 10.0)])
    radius: PositiveFloat = 1.0
    boundaries: list[BoundaryName] = Field(default_factory=lambda: ["absorbing"])

    @field_validator("nodes")
    @classmethod
    def _nodes_min(cls, value: list[int]) -> list[int]:
        if any(n < 8 for n in value):
            raise ValueError("node counts must be >= 8")
        return value

    def build(self) -> Grid:
        if self.topology == "line":
            lo, hi = self.extents[0]
            return line_grid(lo, hi, self.nodes[0], self.boundaries[0])
        if self.topology == "ring":
            return ring_grid(self.nodes[0], self.radius)
        if self.topology == "plane":
            bx, by = (self.boundaries * 2)[:2]
            return plane_grid(self.extents[0], self.extents[1], (self.nodes[0], self.nodes[1]), (bx, by))
        return disk_grid(self.radius, self.nodes[0], self.nodes[1], self.boundaries[0])


class PotentialConfig(_Strict):
    kind: Literal["free", "harmonic", "coulomb"] = "free"
    omega: PositiveFloat = 1.0
    strength: float = 1.0
    softening: float = 0.0
    center: float = 0.0
    b_field: float | None = None

    def build(self, grid: Grid, k: PhysicalConstants) -> Potentials:
        if self.kind == "harmonic":
            pot = harmonic(grid, k, self.omega, self.center)
        elif self.kind == "coulomb":
            pot = coulomb(grid, self.strength, self.softening)
        else:
            pot = free(grid)
        if self.b_field is not None:
            pot = uniform_magnetic(grid, self.b_field, pot)
        return pot


class InitialStateConfig(_Strict):
    kind: str = "none"
    params: dict[str, float | int | str | bool] = Field(default_factory=dict)


class ExperimentConfig(_Strict):
    schema_version: Literal[1] = Field(SCHEMA_VERSION, alias="schema")
    constants: ConstantsConfig = Field(default_factory=ConstantsConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    potential: PotentialConfig = Field(default_factory=PotentialConfig)
    initial_state: InitialStateConfig = Field(default_factory=InitialStateConfig)
    dt: PositiveFloat = 1e-3
    steps: int = Field(100, ge=0)
    ensemble_size: int = Field(1000, ge=1)
    seed: int = Field(0, ge=0, lt=SEED_LIMIT)
    outputs: list[str] = Field(default_factory=lambda: ["csv", "binary"])
    tolerances: dict[str, PositiveFloat] = Field(default_factory=dict)
    params: dict[str, Any] = Field(default_factory=dict)

    def to_tree(self) -> dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)

    def wants(self, output: str) -> bool:
        return output in self.outputs

    def tolerance(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def param(self, name: str, default: Any) -> Any:
        return self.params.get(name, default)


def config_hash(config: ExperimentConfig) -> str:
    canonical = json.dumps(config.to_tree(), sort_keys=True, ensure_ascii=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def read_config_tree(path: Path) -> dict[str, Any]:
    """Parse a TOML or JSON config file into a plain tree."""
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from exc
    try:
        if path.suffix.lower() == ".json":
            tree = json.loads(raw.decode("utf-8"))
        else:
            tree = tomllib.loads(raw.decode("utf-8"))
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(str(path), f"cannot parse config: {exc}") from exc
    if not isinstance(tree, dict):
        raise ConfigError(str(path), "top level must be a table")
    if tree.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ConfigError("schema", f"unsupported schema version {tree.get('schema')!r}")
    return tree


def _deep_merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict) and key not in ("overrides", "tolerances"):
            out[key] = _deep_merge(out[key], value)
        elif isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = {**out[key], **value}
        else:
            out[key] = value
    return out


def merge_config(defaults: ExperimentConfig, override: dict[str, Any] | None) -> ExperimentConfig:
    """Overlay a config tree on experiment defaults and validate the result."""
    tree = _deep_merge(defaults.to_tree(), override or {})
    return ExperimentConfig.model_validate(tree)


def save_config(config: ExperimentConfig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(config.to_tree(), indent=2, sort_keys=True, ensure_ascii=True) + "\n")
    return path
