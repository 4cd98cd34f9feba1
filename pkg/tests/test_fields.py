from __future__ import annotations

import math

import numpy as np
import pytest

from zsmlab.core.constants import make_constants
from zsmlab.core.errors import MaskedLoopError
from zsmlab.core.field import ComplexField, ScalarField
from zsmlab.core.grid import disk_grid, line_grid, plane_grid, ring_grid
from zsmlab.core.potentials import uniform_magnetic
from zsmlab.fields.kinematics import kinematic_fields, node_mask, quantum_kinetic
from zsmlab.fields.phase import PhaseField, polar_decompose, recompose
from zsmlab.fields.winding import circulation, enclosing_loops, plaquette_loop, rectangle_loop, ring_loop

K = make_constants()


def _vortex() -> ComplexField:
    grid = plane_grid((-3.0, 3.0), (-3.0, 3.0), (33, 33))
    x, y = grid.mesh
    return ComplexField(grid, (x + 1j * y) * np.exp(-(x**2 + y**2) / 4.0))


def test_ring_plane_wave_winds_three_times() -> None:
    grid = ring_grid(128)
    psi = ComplexField(grid, np.exp(3j * grid.angle) / math.sqrt(2.0 * math.pi))
    _, phase = polar_decompose(psi, K.hbar)
    report = circulation(phase, ring_loop(grid), K)
    assert report.n == 3
    assert report.accepted
    assert report.circulation == pytest.approx(3.0 * K.planck)


def test_recompose_returns_the_wave_function() -> None:
    grid = ring_grid(64)
    psi = ComplexField(grid, np.exp(-2j * grid.angle) * (1.5 + np.cos(grid.angle)))
    rho, phase = polar_decompose(psi, K.hbar)
    np.testing.assert_allclose(recompose(rho, phase).values, psi.values, atol=1e-12)


def test_vortex_node_is_masked_and_enclosed() -> None:
    psi = _vortex()
    rho, phase = polar_decompose(psi, K.hbar)
    assert phase.mask is not None
    assert phase.mask[16, 16]
    assert int(phase.mask.sum()) == 1

    loops = enclosing_loops(psi.grid, phase.mask)
    assert len(loops) == 1
    label, loop = loops[0]
    report = circulation(phase, loop, K, label=label)
    assert report.n == 1
    assert report.accepted
    assert float(phase.plaquette_residual().max()) < 1e-9


def test_reversed_loop_negates_winding() -> None:
    _, phase = polar_decompose(_vortex(), K.hbar)
    loop = rectangle_loop((14, 14), (18, 18))
    forward = circulation(phase, loop, K)
    backward = circulation(phase, loop[::-1], K)
    assert (forward.n, backward.n) == (1, -1)
    assert forward.accepted and backward.accepted
    assert backward.circulation == pytest.approx(-forward.circulation, abs=1e-12)


def test_winding_does_not_depend_on_the_enclosing_loop() -> None:
    _, phase = polar_decompose(_vortex(), K.hbar)
    for lo, hi in [((14, 14), (18, 18)), ((10, 13), (17, 19)), ((15, 6), (25, 28))]:
        report = circulation(phase, rectangle_loop(lo, hi), K)
        assert report.n == 1, (lo, hi)
        assert report.accepted
    assert circulation(phase, rectangle_loop((2, 2), (8, 9)), K).n == 0


def test_loop_through_node_is_rejected() -> None:
    _, phase = polar_decompose(_vortex(), K.hbar)
    with pytest.raises(MaskedLoopError):
        circulation(phase, rectangle_loop((16, 15), (18, 17)), K)


def test_plaquettes_away_from_the_node_carry_no_winding() -> None:
    _, phase = polar_decompose(_vortex(), K.hbar)
    loop = plaquette_loop(4, 7, phase.grid)
    assert loop == [(4, 7), (5, 7), (5, 8), (4, 8)]
    report = circulation(phase, loop, K)
    assert report.n == 0
    assert report.accepted
    with pytest.raises(MaskedLoopError):
        circulation(phase, plaquette_loop(15, 15, phase.grid), K)


def test_from_unwrapped_seam_jump_sets_disk_circulation() -> None:
    grid = disk_grid(2.0, 16, 32)
    phase = PhaseField.from_unwrapped(grid, 2.0 * K.hbar * grid.mesh[1], K.hbar, seam_jumps=(0.0, 2.0 * K.planck))
    assert phase.cycle_circulation(1, 5) == pytest.approx(2.0 * K.planck)
    np.testing.assert_array_equal(phase.windings(), 0)


def test_flux_correction_for_uniform_field() -> None:
    grid = plane_grid((-2.0, 2.0), (-2.0, 2.0), (17, 17))
    pot = uniform_magnetic(grid, 0.5)
    phase = PhaseField.from_unwrapped(grid, np.zeros(grid.shape), K.hbar)
    report = circulation(phase, rectangle_loop((4, 4), (12, 12)), K, vector_potential=pot.vector)
    assert report.flux_correction == pytest.approx(2.0)
    assert report.kinetic_circulation == pytest.approx(-2.0)


def test_gaussian_velocities() -> None:
    grid = line_grid(-6.0, 6.0, 241)
    x = grid.coords[0]
    sigma, momentum = 1.3, 0.8
    rho = ScalarField(grid, np.exp(-(x**2) / (2.0 * sigma**2)))
    phase = PhaseField.from_unwrapped(grid, momentum * x, K.hbar)
    kin = kinematic_fields(rho, phase, K)
    np.testing.assert_allclose(kin.current.values[0], momentum / K.mass, atol=1e-12)
    np.testing.assert_allclose(kin.osmotic.values[0], -K.diffusion * x / sigma**2, atol=1e-9)
    np.testing.assert_allclose(kin.forward_drift.values - kin.backward_drift.values, 2.0 * kin.osmotic.values)


def test_quantum_kinetic_of_gaussian() -> None:
    grid = line_grid(-6.0, 6.0, 401)
    x = grid.coords[0]
    rho = ScalarField(grid, np.exp(-(x**2) / 2.0))
    q = quantum_kinetic(rho, K).values
    exact = -(K.hbar**2 / (2.0 * K.mass)) * (x**2 / 4.0 - 0.5)
    inner = np.abs(x) < 3.0
    np.testing.assert_allclose(q[inner], exact[inner], atol=1e-3)


def test_node_mask_threshold() -> None:
    grid = line_grid(0.0, 1.0, 16)
    values = np.ones(16)
    values[4] = 1e-12
    mask = node_mask(ScalarField(grid, values), 1e-9)
    assert mask is not None
    assert mask[4]
    assert int(mask.sum()) == 1
    assert node_mask(ScalarField(grid, np.ones(16))) is None
