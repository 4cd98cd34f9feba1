"""Zitterbewegung phase carried along classical trajectories.

    d theta = (E dt - p'.dq) / hbar,    S = -hbar theta,    theta(0) = phi

relativistic:      E = gamma (mc^2 + m Phi_g) + e Phi_e + V
                   p' = gamma (m + m Phi_g / c^2) v + e A / c
non-relativistic:  E = mc^2 + m v^2 / 2 + m Phi_g + e Phi_e + V
                   p' = m v + e A / c
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import EndpointConstraintError, InvalidParameterError, SuperluminalError

LOG = logging.getLogger("zsmlab.zbw")


@dataclass(frozen=True, eq=False)
class PathSample:
    """A sampled trajectory q(t) with optional velocities (finite-differenced when absent)."""

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray | None = None

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        positions = np.asarray(self.positions, dtype=float)
        if positions.ndim == 1:
            positions = positions[:, None]
        if times.ndim != 1 or positions.shape[0] != times.size:
            raise InvalidParameterError("trajectory", "times and positions must have matching length")
        if times.size < 2:
            raise InvalidParameterError("trajectory", "need at least two samples")
        velocities = self.velocities
        if velocities is None:
            velocities = np.gradient(positions, times, axis=0, edge_order=2)
        velocities = np.asarray(velocities, dtype=float).reshape(positions.shape)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "velocities", velocities)

    @property
    def samples(self) -> int:
        return int(self.times.size)

    @property
    def speed(self) -> np.ndarray:
        return np.linalg.norm(self.velocities, axis=1)

    def length(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.positions, axis=0), axis=1)))


@dataclass(frozen=True, eq=False)
class PathPotentials:
    """External potentials sampled along a path.

    gravitational is Phi_g (per unit mass), electric is Phi_e (per unit
    charge); scalar V and vector A are as given. Missing parts are zero.
    """

    scalar: np.ndarray | None = None
    gravitational: np.ndarray | None = None
    electric: np.ndarray | None = None
    vector: np.ndarray | None = None

    def parts(self, samples: int, dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        def take(values: np.ndarray | None, shape: tuple[int, ...]) -> np.ndarray:
            if values is None:
                return np.zeros(shape)
            return np.broadcast_to(np.asarray(values, dtype=float), shape)

        return (
            take(self.scalar, (samples,)),
            take(self.gravitational, (samples,)),
            take(self.electric, (samples,)),
            take(self.vector, (samples, dim)),
        )


FREE = PathPotentials()


@dataclass(frozen=True, eq=False)
class ZbwPhaseRecord:
    path: PathSample
    theta: np.ndarray
    action: np.ndarray
    initial_phase: float
    gamma: np.ndarray
    energy: np.ndarray
    momentum: np.ndarray
    lagrangian_integral: np.ndarray
    relativistic: bool

    @property
    def total_phase(self) -> float:
        return float(self.theta[-1] - self.theta[0])

    def legendre_gap(self) -> float:
        """max |S(t) - S(0) - integral of L dt|, zero up to integrator error."""
        return float(np.max(np.abs(self.action - self.action[0] - self.lagrangian_integral)))


def _cumulative_trapezoid(values: np.ndarray, steps: np.ndarray) -> np.ndarray:
    out = np.zeros(values.shape[0])
    out[1:] = np.cumsum(0.5 * (values[1:] + values[:-1]) * steps)
    return out


def energy_momentum(
    path: PathSample,
    pot: PathPotentials,
    k: PhysicalConstants,
    relativistic: bool,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(E, p', gamma, L) at every sample."""
    n, dim = path.positions.shape
    v_pot, phi_g, phi_e, vec_a = pot.parts(n, dim)
    vel = path.velocities
    c = k.light_speed
    speed = path.speed
    coupling = k.charge / c
    v_dot_a = np.sum(vel * vec_a, axis=1)
    if relativistic:
        fast = np.flatnonzero(speed >= c)
        if fast.size:
            raise SuperluminalError(int(fast[0]), float(speed[fast[0]]))
        gamma = 1.0 / np.sqrt(1.0 - (speed / c) ** 2)
        rest = k.mass * c**2 + k.mass * phi_g
        energy = gamma * rest + k.charge * phi_e + v_pot
        momentum = (gamma * (k.mass + k.mass * phi_g / c**2))[:, None] * vel + coupling * vec_a
        lagrangian = -rest / gamma - k.charge * phi_e - v_pot + coupling * v_dot_a
    else:
        gamma = np.ones(n)
        kinetic = 0.5 * k.mass * speed**2
        energy = k.rest_energy + kinetic + k.mass * phi_g + k.charge * phi_e + v_pot
        momentum = k.mass * vel + coupling * vec_a
        lagrangian = kinetic - k.rest_energy - k.mass * phi_g - k.charge * phi_e - v_pot + coupling * v_dot_a
    return energy, momentum, gamma, lagrangian


def phase_accumulate(
    path: PathSample,
    pot: PathPotentials,
    k: PhysicalConstants,
    relativistic: bool = False,
    initial_phase: float = 0.0,
) -> ZbwPhaseRecord:
    """Trapezoidal accumulation of the zbw phase along a sampled path."""
    energy, momentum, gamma, lagrangian = energy_momentum(path, pot, k, relativistic)
    dt = np.diff(path.times)
    dq = np.diff(path.positions, axis=0)
    p_mid = 0.5 * (momentum[1:] + momentum[:-1])
    e_mid = 0.5 * (energy[1:] + energy[:-1])
    d_theta = (e_mid * dt - np.sum(p_mid * dq, axis=1)) / k.hbar
    theta = initial_phase + np.concatenate([[0.0], np.cumsum(d_theta)])
    action = -k.hbar * theta
    record = ZbwPhaseRecord(
        path=path,
        theta=theta,
        action=action,
        initial_phase=initial_phase,
        gamma=gamma,
        energy=energy,
        momentum=momentum,
        lagrangian_integral=_cumulative_trapezoid(lagrangian, dt),
        relativistic=relativistic,
    )
    LOG.debug(
        "zbw_phase=%s",
        json.dumps({"samples": path.samples, "relativistic": relativistic, "total_phase": record.total_phase}),
    )
    return record


@dataclass(frozen=True)
class LoopPhase:
    action: float
    phase: float
    n: int
    residual: float
    tolerance: float

    @property
    def accepted(self) -> bool:
        return self.residual <= self.tolerance

    def to_json(self) -> dict[str, float | int | bool]:
        return {
            "action": self.action,
            "phase": self.phase,
            "n": self.n,
            "residual": self.residual,
            "accepted": self.accepted,
        }


def loop_phase(
    path: PathSample,
    pot: PathPotentials,
    k: PhysicalConstants,
    *,
    relativistic: bool = False,
    fixed_time: bool = True,
    closure_tol: float = 1e-6,
    tol: float = 1e-6,
) -> LoopPhase:
    """Loop integral of p'.dq - E dt around a closed path, in units of hbar.

    fixed_time treats the samples as one spatial curve at a single instant
    (the E dt term drops); otherwise the path must also return to its
    starting time. The phase is classified against 2*pi*n with tolerance
    tol * 2*pi.
    """
    scale = max(path.length(), float(np.max(np.abs(path.positions))), 1e-300)
    gap = float(np.linalg.norm(path.positions[-1] - path.positions[0]))
    if gap > closure_tol * scale:
        raise EndpointConstraintError(f"loop does not close: endpoint gap {gap:.3e}")
    energy, momentum, _, _ = energy_momentum(path, pot, k, relativistic)
    dq = np.diff(path.positions, axis=0)
    # close the polygon exactly on the starting point
    dq[-1] += path.positions[0] - path.positions[-1]
    action = float(np.sum(0.5 * (momentum[1:] + momentum[:-1]) * dq))
    if not fixed_time:
        span = float(path.times[-1] - path.times[0])
        if abs(span) > closure_tol * max(float(np.ptp(path.times)), 1e-300):
            raise EndpointConstraintError(f"space-time loop does not return to its start time (span {span:.3e})")
        action -= float(np.sum(0.5 * (energy[1:] + energy[:-1]) * np.diff(path.times)))
    phase = action / k.hbar
    n = int(round(phase / (2.0 * math.pi)))
    residual = abs(phase - 2.0 * math.pi * n)
    return LoopPhase(action, phase, n, residual, tol * 2.0 * math.pi)
