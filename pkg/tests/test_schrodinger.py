from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from zsmlab.core.constants import make_constants
from zsmlab.core.errors import InvalidParameterError, NodeEncounteredError, NormalizationError, UnsupportedFeatureError
from zsmlab.core.field import ComplexField
from zsmlab.core.grid import disk_grid, line_grid, plane_grid, ring_grid
from zsmlab.core.potentials import free, harmonic, uniform_magnetic
from zsmlab.schrodinger.eigen import (
    central_eigenstate,
    disk_residual,
    line_eigenstate,
    ring_eigenstate,
    ring_spectrum,
    state_from_radial,
)
from zsmlab.schrodinger.evolution import evolve_linear, evolve_nonlinear_classical
from zsmlab.schrodinger.states import density_moments, free_gaussian_width, gaussian_packet, normalized

K = make_constants()


def test_ring_spectrum_is_doubly_degenerate() -> None:
    eig = ring_spectrum(ring_grid(256), K)
    assert abs(eig[0]) < 1e-10
    for n in range(1, 5):
        pair = eig[2 * n - 1 : 2 * n + 1]
        assert pair[1] - pair[0] < 1e-9
        assert float(pair.mean()) == pytest.approx(0.5 * n * n, rel=1e-3)


def test_ring_spectrum_needs_ring() -> None:
    with pytest.raises(InvalidParameterError):
        ring_spectrum(line_grid(0.0, 1.0, 16), K)


def test_ring_eigenstate_is_normalized() -> None:
    state = ring_eigenstate(2, 1.5, K, nodes=128)
    assert state.energy == pytest.approx(4.0 / (2.0 * 1.5**2))
    assert state.psi.norm() == pytest.approx(1.0)
    assert state.with_rest_energy(K).energy == pytest.approx(state.energy + 1.0)


def test_line_eigenstates_of_harmonic_oscillator() -> None:
    grid = line_grid(-8.0, 8.0, 401)
    pot = harmonic(grid, K, 1.0)
    ground = line_eigenstate(pot.scalar, K)
    first = line_eigenstate(pot.scalar, K, level=1)
    assert ground.energy == pytest.approx(0.5, rel=1e-3)
    assert first.energy == pytest.approx(1.5, rel=1e-3)
    assert ground.psi.norm() == pytest.approx(1.0)


def test_central_eigenstate_energy() -> None:
    grid = disk_grid(6.0, 120, 16)
    pot = harmonic(grid, K, 1.0)
    ground = central_eigenstate(pot.scalar, 0, K)
    vortex = central_eigenstate(pot.scalar, 1, K)
    assert ground.energy == pytest.approx(1.0, rel=5e-3)
    assert vortex.energy == pytest.approx(2.0, rel=5e-3)
    with pytest.raises(InvalidParameterError):
        central_eigenstate(pot.scalar, -1, K)


def test_central_eigenstate_residual_uses_the_disk_hamiltonian() -> None:
    grid = disk_grid(6.0, 120, 16)
    pot = harmonic(grid, K, 1.0)
    vortex = central_eigenstate(pot.scalar, 1, K)
    assert vortex.residual <= 1e-8
    profile = np.abs(vortex.psi.values[:, 0]) * np.sqrt(2.0 * np.pi)
    wrong = state_from_radial(grid, profile, 2.0)
    assert disk_residual(grid, pot.scalar.values, K, wrong.values, vortex.energy) > 1e-3


def test_linear_evolution_conserves_norm_and_spreads() -> None:
    grid = line_grid(-12.0, 12.0, 481)
    psi0 = gaussian_packet(grid, K, sigma=1.0)
    traj = evolve_linear(psi0, free(grid), 0.01, 100, K, stride=25)
    assert len(traj.frames) == 5
    assert max(abs(n - 1.0) for n in traj.norms) < 1e-8
    _, width = density_moments(grid, traj.final.density())
    assert width == pytest.approx(free_gaussian_width(1.0, 1.0, K), rel=5e-3)


def test_linear_evolution_is_reversible() -> None:
    grid = line_grid(-10.0, 10.0, 201)
    psi0 = gaussian_packet(grid, K, sigma=1.0, momentum=1.0)
    pot = harmonic(grid, K, 0.5)
    forward = evolve_linear(psi0, pot, 0.02, 50, K, stride=50)
    back = evolve_linear(forward.final, pot, -0.02, 50, K, stride=50)
    np.testing.assert_allclose(back.final.values, psi0.values, atol=1e-9)


def test_evolution_rejects_bad_inputs() -> None:
    grid = line_grid(-5.0, 5.0, 64)
    with pytest.raises(NormalizationError):
        evolve_linear(ComplexField(grid, np.ones(64)), free(grid), 0.01, 1, K)
    disk = disk_grid(2.0, 16, 16)
    with pytest.raises(UnsupportedFeatureError):
        evolve_linear(normalized(disk, np.ones(disk.shape)), uniform_magnetic(disk, 1.0), 0.01, 1, K)


def test_classical_nonlinear_packet_keeps_its_width() -> None:
    grid = line_grid(-10.0, 10.0, 401)
    psi0 = gaussian_packet(grid, K, sigma=1.0)
    traj = evolve_nonlinear_classical(psi0, free(grid), 0.01, 100, K, stride=100)
    _, width = density_moments(grid, traj.final.density())
    assert width == pytest.approx(1.0, rel=1e-2)
    assert traj.substeps == 0


def test_classical_nonlinear_rejects_a_vortex_node() -> None:
    grid = plane_grid((-3.0, 3.0), (-3.0, 3.0), (33, 33))
    x, y = grid.mesh
    psi0 = normalized(grid, (x + 1j * y) * np.exp(-(x**2 + y**2) / 4.0))
    with pytest.raises(NodeEncounteredError) as err:
        evolve_nonlinear_classical(psi0, free(grid), 0.01, 5, K)
    assert err.value.time == 0.0


def test_classical_nonlinear_substeps_large_phases() -> None:
    grid = line_grid(-10.0, 10.0, 401)
    psi0 = gaussian_packet(grid, K, sigma=1.0)
    traj = evolve_nonlinear_classical(psi0, free(grid), 0.01, 4, K, max_phase=0.01)
    assert traj.substeps >= 4
    assert traj.norms[-1] == pytest.approx(1.0, abs=1e-6)


def test_summary_csv(tmp_path: Path) -> None:
    grid = line_grid(-5.0, 5.0, 101)
    traj = evolve_linear(gaussian_packet(grid, K), free(grid), 0.01, 4, K, stride=2)
    path = traj.write_summary(tmp_path / "summary.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "t,norm,energy"
    assert len(lines) == 4
