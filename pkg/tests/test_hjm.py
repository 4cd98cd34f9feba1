from __future__ import annotations

import math

import numpy as np
import pytest

from zsmlab.core.constants import make_constants
from zsmlab.core.errors import InvalidParameterError, MissingFramesError
from zsmlab.core.field import ComplexField
from zsmlab.core.grid import disk_grid, ring_grid
from zsmlab.core.potentials import free, harmonic
from zsmlab.fields.phase import PhaseField, polar_decompose
from zsmlab.hjm.gate import quantization_gate
from zsmlab.hjm.residuals import hjm_residuals, stationary_frames
from zsmlab.hjm.wallstrom import classify, ring_superposition_check, wallstrom_extraneous_solution, winding_factor
from zsmlab.schrodinger.eigen import ring_eigenstate

K = make_constants()


def test_gate_accepts_integer_winding_on_ring() -> None:
    grid = ring_grid(128)
    psi = ComplexField(grid, np.exp(3j * grid.angle) / math.sqrt(2.0 * math.pi))
    _, phase = polar_decompose(psi, K.hbar)
    verdict = quantization_gate(phase, K)
    assert verdict.verdict == "ACCEPT"
    assert verdict.windings == [3]
    assert verdict.to_json()["loops"][0]["label"] == "ring"


def test_gate_rejects_fractional_seam_jump() -> None:
    grid = ring_grid(128)
    phase = PhaseField.from_unwrapped(grid, 1.5 * K.hbar * grid.angle, K.hbar, seam_jumps=(1.5 * K.planck,))
    verdict = quantization_gate(phase, K)
    assert verdict.verdict == "REJECT"
    assert not verdict.accepted


def test_ring_eigenstate_has_vanishing_residuals() -> None:
    state = ring_eigenstate(2, 1.0, K, nodes=128)
    rho, phase = polar_decompose(state.psi, K.hbar)
    report = hjm_residuals(rho, phase, free(rho.grid), K, energy=state.energy)
    assert report.verdict == "PASS"
    assert report.hj_linf < 1e-8
    assert report.continuity_l2 < 1e-8


def test_rest_energy_is_carried_by_the_phase_rate() -> None:
    state = ring_eigenstate(1, 1.0, K, nodes=64)
    rho, phase = polar_decompose(state.psi, K.hbar)
    report = hjm_residuals(rho, phase, free(rho.grid), K, rest_energy=True)
    assert report.energy == pytest.approx(state.energy + K.rest_energy)
    assert report.hj_linf < 1e-8


def test_stationary_frames_recover_the_energy() -> None:
    state = ring_eigenstate(1, 1.0, K, nodes=64)
    rho, phase = polar_decompose(state.psi, K.hbar)
    frames = stationary_frames(rho, phase, state.energy, [0.0, 0.05, 0.1])
    report = hjm_residuals(rho, phase, free(rho.grid), K, frames=frames, t=0.05)
    assert report.energy == pytest.approx(state.energy, rel=1e-9)
    assert report.passed


def test_time_dependent_state_needs_frames() -> None:
    state = ring_eigenstate(1, 1.0, K, nodes=64)
    rho, phase = polar_decompose(state.psi, K.hbar)
    with pytest.raises(MissingFramesError):
        hjm_residuals(rho, phase, free(rho.grid), K, time_dependent=True)


def test_winding_factor_and_classification() -> None:
    assert winding_factor(0.0, K) == 1.0
    assert winding_factor(1.5, K) == pytest.approx(2.0)
    assert classify(winding_factor(1.5, K)) == "integer"
    assert classify(winding_factor(0.5, K)) == "non-integer"


def test_extraneous_solution_matches_centrifugal_problem() -> None:
    grid = disk_grid(6.0, 120, 16)
    pot = harmonic(grid, K, 1.0)
    sol = wallstrom_extraneous_solution(1.5, pot, K)
    assert sol.winding == pytest.approx(2.0)
    assert sol.is_integer
    assert sol.residuals.hj_tol == 1e-6
    assert sol.base_residuals.hj_tol == 1e-6
    assert sol.residuals.passed
    assert sol.energy == pytest.approx(3.0, rel=5e-3)
    np.testing.assert_allclose(
        sol.residuals.hamilton_jacobi.values,
        sol.base_residuals.hamilton_jacobi.values,
        atol=1e-7,
    )
    with pytest.raises(InvalidParameterError):
        wallstrom_extraneous_solution(-1.0, pot, K)


def test_ring_superposition_single_valued_iff_integer_difference() -> None:
    whole = ring_superposition_check(1.0, 3.0)
    assert whole.single_valued
    assert whole.expected_single_valued
    half = ring_superposition_check(1.0, 1.5)
    assert not half.single_valued
    assert not half.expected_single_valued
    with pytest.raises(InvalidParameterError):
        ring_superposition_check(1.0, 2.0, (0.0, 0.0))
