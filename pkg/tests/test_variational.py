from __future__ import annotations

from typing import Any

import numpy as np
import pytest

from zsmlab.core.constants import make_constants
from zsmlab.core.errors import EndpointConstraintError, InvalidParameterError
from zsmlab.core.grid import line_grid
from zsmlab.core.potentials import free, harmonic
from zsmlab.diffusion.ensemble import TrajectoryBundle
from zsmlab.fields.phase import polar_decompose
from zsmlab.schrodinger.eigen import line_eigenstate, ring_eigenstate
from zsmlab.variational.action import ActionEstimate, discrete_action, field_action
from zsmlab.variational.histories import (
    StateHistory,
    coherent_state_history,
    free_gaussian_history,
    harmonic_ground_history,
    ring_plane_wave_history,
)
from zsmlab.variational.stationarity import Perturbation, action_change, fit_power, stationarity_test

K = make_constants()


def _action(history: StateHistory, **kwargs: Any) -> ActionEstimate:
    return field_action(history.slices(), history.grid, history.potentials(), K, **kwargs)


def test_ring_plane_wave_action_is_kinetic() -> None:
    history = ring_plane_wave_history(K, 2, slices=101)
    estimate = _action(history)
    assert estimate.value == pytest.approx(2.0)
    assert estimate.parts["osmotic_kinetic"] == 0.0
    assert _action(history, rest_energy=True).value == pytest.approx(3.0)


def test_ground_state_action_per_decomposition() -> None:
    history = harmonic_ground_history(K, slices=11)
    yasue = _action(history)
    assert yasue.parts["osmotic_kinetic"] == pytest.approx(0.25, rel=1e-6)
    assert yasue.parts["potential"] == pytest.approx(-0.25, rel=1e-6)
    assert abs(yasue.value) < 1e-8
    assert _action(history, decomposition="bbstar").value == pytest.approx(-0.5, rel=1e-6)
    with pytest.raises(InvalidParameterError):
        _action(history, decomposition="other")


def test_free_gaussian_action_density_is_constant() -> None:
    history = free_gaussian_history(K, 1.0)
    expected = K.hbar**2 / (8.0 * K.mass) * history.duration
    assert _action(history).value == pytest.approx(expected, rel=1e-3)


def test_monte_carlo_action_needs_drift() -> None:
    with pytest.raises(InvalidParameterError):
        discrete_action(TrajectoryBundle(0.1, "forward", 1, 1), harmonic_ground_history(K, slices=11).potentials(), K)


def test_variation_must_vanish_at_endpoints() -> None:
    history = harmonic_ground_history(K, slices=11)
    with pytest.raises(EndpointConstraintError):
        action_change(history, K, Perturbation(window="constant"), 1e-3)


def test_fit_power_of_quadratic_change() -> None:
    eps = np.array([1e-3, 2e-3, 4e-3, 8e-3])
    assert fit_power(eps, 3.0 * eps**2) == pytest.approx(2.0)


def test_quantum_states_are_stationary() -> None:
    for history in (ring_plane_wave_history(K, 1), harmonic_ground_history(K), coherent_state_history(K)):
        report = stationarity_test(history, K)
        assert report.stationary, report.to_json()


def test_scaled_current_breaks_stationarity() -> None:
    report = stationarity_test(coherent_state_history(K).with_scaled_current(1.5), K)
    assert not report.stationary
    assert report.fit_power == pytest.approx(1.0, abs=0.2)


def test_solver_states_are_stationary() -> None:
    ring = ring_eigenstate(2, 1.0, K)
    rho, phase = polar_decompose(ring.psi, K.hbar)
    history = StateHistory.from_fields("ring-eigenstate", rho, phase, free(ring.grid), K, slices=201)
    np.testing.assert_allclose(history.current, 2.0 * K.hbar / K.mass, rtol=1e-9)
    assert stationarity_test(history, K).stationary

    grid = line_grid(-8.0, 8.0, 801)
    pot = harmonic(grid, K, 1.0)
    ground = line_eigenstate(pot.scalar, K)
    rho, phase = polar_decompose(ground.psi, K.hbar)
    history = StateHistory.from_fields("harmonic-eigenstate", rho, phase, pot, K)
    np.testing.assert_allclose(history.potentials().total(), pot.total(), atol=1e-12)
    report = stationarity_test(history, K, epsilons=(0.02, 0.04, 0.08, 0.16))
    assert report.stationary, report.to_json()
