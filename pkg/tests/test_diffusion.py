from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from zsmlab.core.constants import make_constants
from zsmlab.core.errors import InvalidParameterError
from zsmlab.core.field import ScalarField, VectorField, normalize_density
from zsmlab.core.grid import line_grid
from zsmlab.core.potentials import harmonic
from zsmlab.diffusion.acceleration import mean_acceleration
from zsmlab.diffusion.ensemble import (
    EnsembleState,
    TrajectoryBundle,
    read_bundle,
    sample_ensemble,
    simulate,
    step_sde,
    write_bundle,
)
from zsmlab.diffusion.estimators import (
    NodeAudit,
    empirical_density,
    l1_distance,
    mean_derivative,
    node_avoidance_audit,
)
from zsmlab.diffusion.fokker_planck import fokker_planck_step, gaussian_variance, heat_kernel_variance, mass
from zsmlab.fields.phase import PhaseField
from zsmlab.schrodinger.states import free_gaussian_width
from zsmlab.variational.histories import free_gaussian_fields

K = make_constants()


def _gaussian(grid, sigma: float = 1.0) -> ScalarField:
    x = grid.coords[0]
    return normalize_density(ScalarField(grid, np.exp(-(x**2) / (2.0 * sigma**2))))


def _zero_drift(grid) -> VectorField:
    return VectorField(grid, np.zeros((grid.ndim, *grid.shape)))


def test_sampling_is_seeded_and_needs_normalized_density() -> None:
    grid = line_grid(-8.0, 8.0, 321)
    rho = _gaussian(grid)
    a = sample_ensemble(rho, 500, seed=11)
    b = sample_ensemble(rho, 500, seed=11)
    np.testing.assert_array_equal(a.positions, b.positions)
    assert a.positions.shape == (500, 1)
    assert not np.array_equal(a.positions, sample_ensemble(rho, 500, seed=12).positions)

    with pytest.raises(InvalidParameterError):
        sample_ensemble(ScalarField(grid, 2.0 * rho.values), 10, seed=0)
    with pytest.raises(InvalidParameterError):
        sample_ensemble(rho, 0, seed=0)


def test_step_rejects_non_positive_dt() -> None:
    grid = line_grid(-8.0, 8.0, 64)
    state = sample_ensemble(_gaussian(grid), 10, seed=0)
    with pytest.raises(InvalidParameterError):
        step_sde(state, _zero_drift(grid), 0.0, K)


def test_paths_do_not_depend_on_thread_count() -> None:
    grid = line_grid(-20.0, 20.0, 401)
    state = sample_ensemble(_gaussian(grid), 1000, seed=4)
    single, _ = simulate(state, _zero_drift(grid), 0.01, 10, K, block_size=256)
    pooled, _ = simulate(state, _zero_drift(grid), 0.01, 10, K, threads=3, block_size=256)
    np.testing.assert_array_equal(single.positions, pooled.positions)
    assert single.t == pytest.approx(0.1)


def test_backward_run_steps_back_in_time() -> None:
    grid = line_grid(-20.0, 20.0, 401)
    state = sample_ensemble(_gaussian(grid), 200, seed=4)
    final, bundle = simulate(state, _zero_drift(grid), 0.01, 5, K, direction="backward")
    assert final.t == pytest.approx(-0.05)
    assert bundle.times[-1] == pytest.approx(-0.05)


def test_wiener_increments_have_expected_moments() -> None:
    grid = line_grid(-20.0, 20.0, 401)
    dt = 0.01
    state = sample_ensemble(_gaussian(grid), 2000, seed=8)
    _, bundle = simulate(state, _zero_drift(grid), dt, 20, K)
    stats = bundle.wiener.summary(2.0 * K.diffusion * dt)
    assert stats["count"] == 40000
    assert stats["mean_z"] < 5.0
    assert stats["variance_ratio"] == pytest.approx(1.0, abs=0.05)


def test_backward_steps_draw_their_own_noise() -> None:
    grid = line_grid(-8.0, 8.0, 321)
    state = sample_ensemble(_gaussian(grid), 200, seed=5)
    forward = step_sde(state, _zero_drift(grid), 0.01, K)
    backward = step_sde(state, _zero_drift(grid), 0.01, K, "backward")
    again = step_sde(state, _zero_drift(grid), 0.01, K, "backward")
    np.testing.assert_array_equal(backward.increments, again.increments)
    assert not np.allclose(np.abs(forward.increments), np.abs(backward.increments))
    assert backward.t == pytest.approx(-0.01)


def test_absorbing_edge_removes_particles() -> None:
    grid = line_grid(-5.0, 5.0, 101)
    state = EnsembleState(grid, 0.0, np.array([[4.99], [0.0]]), np.ones(2, dtype=bool), seed=1)
    push = VectorField(grid, np.full((1, 101), 100.0))
    after = step_sde(state, push, 0.1, K)
    assert after.absorbed >= 1
    assert not after.alive[0]


def test_bundle_file_keeps_frames(tmp_path: Path) -> None:
    grid = line_grid(-20.0, 20.0, 401)
    state = sample_ensemble(_gaussian(grid), 50, seed=2)
    _, bundle = simulate(state, _zero_drift(grid), 0.01, 6, K, stride=3)
    path = write_bundle(bundle, tmp_path / "paths.zsmt")
    loaded = read_bundle(path)
    assert loaded.direction == "forward"
    assert loaded.stride == 3
    assert loaded.times == pytest.approx(bundle.times)
    assert len(loaded.frames) == 3
    np.testing.assert_array_equal(loaded.frames[-1], bundle.frames[-1])


def test_fokker_planck_conserves_mass_and_spreads_like_heat_kernel() -> None:
    grid = line_grid(-15.0, 15.0, 601)
    rho = _gaussian(grid)
    dt, steps = 0.01, 50
    for _ in range(steps):
        rho = fokker_planck_step(rho, _zero_drift(grid), dt, K)
    assert mass(rho) == pytest.approx(1.0, abs=1e-8)
    assert gaussian_variance(rho) == pytest.approx(heat_kernel_variance(1.0, steps, dt, K), rel=1e-3)


def test_backward_fokker_planck_undoes_forward() -> None:
    grid = line_grid(-12.0, 12.0, 512)
    dt, steps = 1e-3, 300
    rho0 = _gaussian(grid)
    rho = rho0
    for step in range(1, steps + 1):
        fields = free_gaussian_fields(grid, K, 1.0, step * dt)
        rho = fokker_planck_step(rho, fields.forward_drift, dt, K)
    assert mass(rho) == pytest.approx(1.0, abs=1e-6)
    exact = _gaussian(grid, free_gaussian_width(1.0, steps * dt, K))
    assert l1_distance(rho, exact) < 0.01

    back = rho
    for step in range(steps - 1, -1, -1):
        fields = free_gaussian_fields(grid, K, 1.0, step * dt)
        back = fokker_planck_step(back, fields.backward_drift, dt, K, "backward")
    assert mass(back) == pytest.approx(1.0, abs=1e-6)
    assert l1_distance(back, rho0) < 0.01


def test_empirical_density_tracks_source() -> None:
    grid = line_grid(-8.0, 8.0, 321)
    rho = _gaussian(grid)
    ens = sample_ensemble(rho, 20_000, seed=5)
    assert l1_distance(empirical_density(ens), rho) < 0.1
    with pytest.raises(InvalidParameterError):
        empirical_density(sample_ensemble(rho, 10, seed=5))


def test_node_audit_counts_entries_once() -> None:
    grid = line_grid(-5.0, 5.0, 201)
    x = grid.coords[0]
    rho = normalize_density(ScalarField(grid, x**2 * np.exp(-(x**2))))
    audit = NodeAudit(rho, node_floor=1e-4)
    audit.observe(0.0, np.array([[0.0], [1.0]]))
    audit.observe(0.1, np.array([[0.0], [1.0]]))
    assert audit.entries == 1
    audit.observe(0.2, np.array([[1.0], [0.0]]))
    report = audit.report()
    assert report.entries == 2
    assert report.node_cells >= 1
    assert report.min_relative_density < 1e-4


def test_node_avoidance_audit_over_a_bundle() -> None:
    grid = line_grid(-5.0, 5.0, 201)
    x = grid.coords[0]
    rho = normalize_density(ScalarField(grid, x**2 * np.exp(-(x**2))))
    away = TrajectoryBundle(0.1, "forward", 1, 1, times=[0.0, 0.1], frames=[np.array([[1.0], [-1.2]])] * 2)
    report = node_avoidance_audit(away, rho)
    assert report.entries == 0
    assert report.samples == 4
    assert report.min_node_relative_density == 1.0

    hit = TrajectoryBundle(0.1, "forward", 1, 1, times=[0.0, 0.1], frames=[np.array([[1.0]]), np.array([[0.0]])])
    assert node_avoidance_audit(hit, [rho, rho]).entries == 1
    with pytest.raises(InvalidParameterError):
        node_avoidance_audit(hit, [rho])


def test_ground_state_mean_acceleration_balances_force() -> None:
    grid = line_grid(-4.0, 4.0, 161)
    x = grid.coords[0]
    sigma_sq = K.diffusion
    rho = normalize_density(ScalarField(grid, np.exp(-(x**2) / (2.0 * sigma_sq))))
    phase = PhaseField.from_unwrapped(grid, np.zeros(grid.shape), K.hbar)
    report = mean_acceleration(rho, phase, harmonic(grid, K, 1.0), K)
    assert report.evaluated_nodes > 100
    assert report.residual_l2 < 1e-6


def test_forward_mean_derivative_recovers_constant_drift() -> None:
    grid = line_grid(-20.0, 20.0, 81)
    state = sample_ensemble(_gaussian(grid), 20_000, seed=9)
    drift = VectorField(grid, np.full((1, 81), 0.7))
    _, bundle = simulate(state, drift, 0.01, 10, K)
    estimate = mean_derivative(bundle, grid)
    valid = np.isfinite(estimate.stderr[0])
    counts = estimate.counts[valid]
    pooled = float(np.sum(estimate.field.values[0][valid] * counts) / np.sum(counts))
    assert pooled == pytest.approx(0.7, abs=0.1)
    assert estimate.direction == "forward"
