from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from zsmlab.core.constants import make_constants
from zsmlab.core.errors import EndpointConstraintError, SuperluminalError, UnsupportedFeatureError
from zsmlab.zbw.bohr import bohr_orbit, bohr_table, circular_orbit_path, integrate_orbit, write_bohr_table
from zsmlab.zbw.hamilton_jacobi import classical_hj_residual
from zsmlab.zbw.phase import FREE, PathPotentials, PathSample, loop_phase, phase_accumulate
from zsmlab.zbw.shifts import frequency_shift, uniform_field_potential

K = make_constants()
SI = make_constants("SI")


def _uniform_motion(speed: float) -> PathSample:
    times = np.linspace(0.0, 10.0, 101)
    return PathSample(times, speed * times, np.full((101, 1), speed))


def test_particle_at_rest_ticks_at_compton_frequency() -> None:
    record = phase_accumulate(_uniform_motion(0.0), FREE, K)
    assert record.total_phase == pytest.approx(10.0 * K.compton_freq)
    np.testing.assert_allclose(record.action, -K.hbar * record.theta)


def test_legendre_gap_vanishes_for_uniform_motion() -> None:
    assert phase_accumulate(_uniform_motion(0.3), FREE, K).legendre_gap() < 1e-12
    moving = phase_accumulate(_uniform_motion(0.6), FREE, K, relativistic=True)
    np.testing.assert_allclose(moving.gamma, 1.25)
    assert moving.legendre_gap() < 1e-12


def test_relativistic_phase_rejects_superluminal_samples() -> None:
    with pytest.raises(SuperluminalError):
        phase_accumulate(_uniform_motion(1.2), FREE, K, relativistic=True)


def test_classical_hj_residual_along_accumulated_phase() -> None:
    pot = PathPotentials(gravitational=np.full(101, 0.01), electric=np.full(101, 0.02))
    for relativistic in (False, True):
        record = phase_accumulate(_uniform_motion(0.4), pot, K, relativistic=relativistic)
        report = classical_hj_residual(record, pot, K)
        assert report.relativistic is relativistic
        assert report.passed(1e-12)


def test_circular_loop_phase_counts_windings() -> None:
    quantized = loop_phase(circular_orbit_path(2.0, 1.5, samples=4096), FREE, K, tol=1e-4)
    assert quantized.n == 3
    assert quantized.accepted
    off = loop_phase(circular_orbit_path(2.0, 1.6, samples=4096), FREE, K, tol=1e-4)
    assert not off.accepted


def test_open_path_is_not_a_loop() -> None:
    half = circular_orbit_path(1.0, 1.0, samples=256, turns=0.5)
    with pytest.raises(EndpointConstraintError):
        loop_phase(half, FREE, K)


def test_bohr_ground_state_in_si() -> None:
    ground = bohr_orbit(1, SI)
    assert ground.energy_ev == pytest.approx(-13.6057, rel=1e-4)
    assert ground.radius == pytest.approx(5.29177e-11, rel=1e-5)
    assert ground.angular_momentum == pytest.approx(SI.hbar)
    table = bohr_table(SI, n_max=4)
    for orbit in table:
        assert orbit.energy * orbit.n**2 == pytest.approx(ground.energy, rel=1e-12)
    with pytest.raises(UnsupportedFeatureError):
        bohr_orbit(1, K)


def test_bohr_table_csv(tmp_path: Path) -> None:
    path = write_bohr_table(bohr_table(SI, n_max=3), SI, tmp_path / "bohr.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "n,r_n_m,E_n_eV,L_over_hbar"
    assert len(lines) == 4


def test_verlet_orbit_closes_after_one_period() -> None:
    ground = bohr_orbit(1, SI)
    path = integrate_orbit(ground.radius, ground.speed, SI, steps=4096)
    gap = float(np.linalg.norm(path.positions[-1] - path.positions[0]))
    assert gap / ground.radius < 1e-4
    np.testing.assert_allclose(np.linalg.norm(path.positions, axis=1), ground.radius, rtol=1e-4)


def test_frequency_shifts_in_natural_units() -> None:
    shift = frequency_shift(2.0e-3, 5.0e-3, K, distance=100.0)
    assert shift.kappa == pytest.approx(2.0e-3)
    assert shift.epsilon == pytest.approx(5.0e-3)
    assert shift.shifted_frequency == pytest.approx(1.007)
    assert shift.distance_over_compton == pytest.approx(100.0)
    assert frequency_shift(0.0, 0.0, K).shifted_frequency == K.compton_freq


def test_gravity_shift_in_si_is_tiny() -> None:
    phi_g = uniform_field_potential(10.0, 1.0)
    shift = frequency_shift(phi_g, 0.0, SI)
    assert shift.kappa_ratio == pytest.approx(10.0 / SI.light_speed**2)
    assert math.log10(shift.kappa_ratio) == pytest.approx(-16.0, abs=0.5)
