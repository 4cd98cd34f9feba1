from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from zsmlab.core.constants import make_constants
from zsmlab.core.errors import ConfigError, DensityError, GridMismatchError, InvalidParameterError
from zsmlab.core.experiment import (
    ExperimentConfig,
    GridConfig,
    config_hash,
    merge_config,
    read_config_tree,
    save_config,
)
from zsmlab.core.field import ComplexField, ScalarField, integrate, normalize_density
from zsmlab.core.grid import Axis, disk_grid, line_grid, plane_grid, ring_grid
from zsmlab.core.io import append_field, dump_field, read_field_dump, write_field_csv, write_table_csv
from zsmlab.core.potentials import harmonic, uniform_electric, uniform_gravity, uniform_magnetic
from zsmlab.core.stencils import gradient, laplacian


def test_natural_constants_and_derived_values() -> None:
    k = make_constants()
    assert k.diffusion == 0.5
    assert k.compton_freq == 1.0
    assert k.planck == pytest.approx(2.0 * math.pi)
    assert k.with_diffusion_disabled().diffusion == 0.0
    assert k.with_diffusion_disabled().hbar == k.hbar


def test_si_constants_carry_negative_charge() -> None:
    k = make_constants("SI")
    assert k.charge < 0
    assert k.epsilon0 is not None
    assert k.compton_length == pytest.approx(3.8616e-13, rel=1e-4)


def test_constant_overrides_are_validated() -> None:
    assert make_constants(overrides={"mass": 2.0}).diffusion == 0.25
    with pytest.raises(InvalidParameterError):
        make_constants(overrides={"planck": 1.0})
    with pytest.raises(InvalidParameterError):
        make_constants(overrides={"hbar": -1.0})


def test_quadrature_weights_integrate_measure() -> None:
    assert integrate(line_grid(-2.0, 3.0, 51), np.ones(51)) == pytest.approx(5.0)
    ring = ring_grid(64, radius=2.0)
    assert integrate(ring, np.ones(64)) == pytest.approx(4.0 * math.pi)
    disk = disk_grid(3.0, 40, 32)
    assert integrate(disk, np.ones(disk.shape)) == pytest.approx(9.0 * math.pi)


def test_disk_has_no_node_at_origin() -> None:
    disk = disk_grid(1.0, 16, 16)
    assert disk.coords[0][0] == pytest.approx(0.5 / 16)


def test_axis_rejects_too_few_nodes() -> None:
    with pytest.raises(InvalidParameterError):
        Axis("x", 0.0, 1.0, 4, "absorbing")


def test_gradient_and_laplacian_exact_on_quadratics() -> None:
    grid = line_grid(-1.0, 1.0, 41)
    x = grid.coords[0]
    np.testing.assert_allclose(gradient(grid, x**2)[0], 2.0 * x, atol=1e-12)
    np.testing.assert_allclose(laplacian(grid, x**2), 2.0, atol=1e-9)


def test_ring_laplacian_second_order() -> None:
    errors = []
    for nodes in (64, 128):
        grid = ring_grid(nodes)
        f = np.sin(grid.angle)
        errors.append(float(np.abs(laplacian(grid, f) + f).max()))
    assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.05)


def test_scalar_field_validation() -> None:
    grid = line_grid(0.0, 1.0, 16)
    with pytest.raises(GridMismatchError):
        ScalarField(grid, np.zeros(15))
    with pytest.raises(InvalidParameterError):
        ScalarField(grid, np.full(16, np.nan))
    field = ScalarField(grid, np.ones(16))
    with pytest.raises(ValueError):
        field.values[0] = 2.0


def test_masked_values_are_zeroed() -> None:
    grid = line_grid(0.0, 1.0, 16)
    mask = np.zeros(16, dtype=bool)
    mask[3] = True
    field = ScalarField(grid, np.ones(16), mask)
    assert field.values[3] == 0.0
    assert not field.valid[3]


def test_normalize_density() -> None:
    grid = line_grid(-5.0, 5.0, 101)
    rho = normalize_density(ScalarField(grid, np.exp(-grid.coords[0] ** 2)))
    assert integrate(grid, rho.values) == pytest.approx(1.0)
    with pytest.raises(DensityError, match=r"at node \(0,\)"):
        normalize_density(ScalarField(grid, -np.ones(101)))
    with pytest.raises(DensityError, match="over all 101 nodes of the line grid") as err:
        normalize_density(ScalarField(grid, np.zeros(101)))
    assert err.value.node is None


def test_potential_parts_add_up() -> None:
    k = make_constants()
    grid = plane_grid((-1.0, 1.0), (-1.0, 1.0), (9, 9))
    pot = harmonic(grid, k, 2.0)
    np.testing.assert_allclose(pot.total(), 2.0 * (grid.mesh[0] ** 2 + grid.mesh[1] ** 2))
    gravity = uniform_gravity(grid, k, 3.0)
    np.testing.assert_allclose(gravity.total(), 3.0 * grid.mesh[0])


def test_uniform_electric_is_minus_e_field_times_x() -> None:
    k = make_constants()
    grid = line_grid(-2.0, 2.0, 21)
    pot = uniform_electric(grid, k, 0.25)
    np.testing.assert_allclose(pot.total(), -0.25 * grid.coords[0])
    assert pot.gravitational is None


def test_uniform_magnetic_curl_on_disk() -> None:
    grid = disk_grid(2.0, 32, 16)
    pot = uniform_magnetic(grid, 0.7)
    np.testing.assert_allclose(pot.magnetic(), 0.7, atol=1e-12)


def test_field_dump_appends_frames(tmp_path: Path) -> None:
    grid = ring_grid(16)
    psi = ComplexField(grid, np.exp(1j * grid.angle))
    path = dump_field(psi, tmp_path / "psi.zsmf")
    with path.open("ab") as fh:
        append_field(ComplexField(grid, 2.0 * psi.values), fh)
    header, frames = read_field_dump(path)
    assert header.kind == "complex"
    assert header.topology == "ring"
    assert header.shape == (16,)
    assert frames.shape == (2, 16)
    np.testing.assert_array_equal(frames[1], 2.0 * psi.values)


def test_field_csv_splits_complex_values(tmp_path: Path) -> None:
    grid = line_grid(0.0, 1.0, 5)
    psi = ComplexField(grid, np.exp(1j * grid.coords[0]))
    path = write_field_csv(psi, tmp_path / "out" / "psi.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "x,re,im"
    assert len(lines) == 6
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    np.testing.assert_allclose(data[:, 1], np.cos(grid.coords[0]))
    np.testing.assert_allclose(data[:, 2], np.sin(grid.coords[0]))


def test_table_csv_header(tmp_path: Path) -> None:
    path = write_table_csv(tmp_path / "t.csv", ["a", "b"], np.array([[1.0, 2.0]]))
    assert path.read_text().splitlines()[0] == "a,b"


def test_config_rejects_unknown_keys_with_path() -> None:
    with pytest.raises(ValidationError) as info:
        ExperimentConfig.model_validate({"grid": {"nodez": [8]}})
    assert info.value.errors()[0]["loc"] == ("grid", "nodez")
    with pytest.raises(ValidationError):
        ExperimentConfig(tolerances={"l1": -1.0})
    with pytest.raises(ValidationError):
        GridConfig(nodes=[4])


def test_merge_keeps_defaults_and_hash_tracks_changes() -> None:
    defaults = ExperimentConfig(grid=GridConfig(nodes=[64]), tolerances={"a": 1.0}, params={"x": 1})
    merged = merge_config(defaults, {"grid": {"radius": 2.0}, "tolerances": {"b": 2.0}})
    assert merged.grid.nodes == [64]
    assert merged.grid.radius == 2.0
    assert merged.tolerances == {"a": 1.0, "b": 2.0}
    assert config_hash(merged) == config_hash(merge_config(defaults, {"grid": {"radius": 2.0}, "tolerances": {"b": 2.0}}))
    assert config_hash(merged) != config_hash(merged.model_copy(update={"seed": 1}))


def test_read_config_tree_toml_and_errors(tmp_path: Path) -> None:
    good = tmp_path / "run.toml"
    good.write_text('schema = 1\nseed = 5\n[grid]\ntopology = "ring"\nnodes = [32]\n')
    tree = read_config_tree(good)
    assert tree["grid"]["topology"] == "ring"

    future = tmp_path / "future.json"
    future.write_text(json.dumps({"schema": 2}))
    with pytest.raises(ConfigError):
        read_config_tree(future)
    with pytest.raises(ConfigError):
        read_config_tree(tmp_path / "missing.toml")


def test_save_config_uses_schema_alias(tmp_path: Path) -> None:
    path = save_config(ExperimentConfig(seed=9), tmp_path / "config.json")
    data = json.loads(path.read_text())
    assert data["schema"] == 1
    assert data["seed"] == 9
