"""(rho, v, u) histories on 1-D grids, analytic or from solver states, for action and variation checks."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import CubicSpline

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import InvalidParameterError
from zsmlab.core.field import ScalarField, VectorField
from zsmlab.core.grid import Grid, line_grid, ring_grid
from zsmlab.core.potentials import Potentials
from zsmlab.fields.kinematics import KinematicFields, current_velocity, osmotic_velocity
from zsmlab.fields.phase import PhaseField
from zsmlab.variational.action import StateSlice

# V(x, t) at arbitrary points, used for displaced paths
PotentialFn = Callable[[np.ndarray, float], np.ndarray]


def zero_potential(x: np.ndarray, t: float) -> np.ndarray:
    return np.zeros_like(x)


@dataclass(frozen=True, eq=False)
class StateHistory:
    name: str
    grid: Grid
    times: np.ndarray
    rho: np.ndarray
    current: np.ndarray
    osmotic: np.ndarray
    potential: PotentialFn = zero_potential

    def __post_init__(self) -> None:
        if self.grid.ndim != 1:
            raise InvalidParameterError("grid", "state histories are one-dimensional")
        nt = self.times.size
        shape = (nt, *self.grid.shape)
        if self.rho.shape != shape or self.current.shape != shape or self.osmotic.shape != shape:
            raise InvalidParameterError("history", f"arrays must have shape {shape}")

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    def slices(self) -> list[StateSlice]:
        return [
            StateSlice(float(t), self.rho[i], self.current[i][None], self.osmotic[i][None])
            for i, t in enumerate(self.times)
        ]

    def potentials(self) -> Potentials:
        """Grid potential; static histories only."""
        x = self.grid.coords[0]
        return Potentials(self.grid, scalar=ScalarField(self.grid, self.potential(x, float(self.times[0]))))

    def with_scaled_current(self, factor: float) -> "StateHistory":
        return replace(self, name=f"{self.name}*v{factor:g}", current=self.current * factor)

    @classmethod
    def from_fields(
        cls,
        name: str,
        rho: ScalarField,
        phase: PhaseField,
        pot: Potentials,
        k: PhysicalConstants,
        *,
        duration: float = 1.0,
        slices: int = 1001,
    ) -> "StateHistory":
        """Stationary history of a solver state: (rho, S) held fixed for duration.

        v and u come from the grid stencils; V is splined so displaced paths
        see the same potential the state was solved in.
        """
        grid = rho.grid
        grid.require_same(phase.grid)
        times = _time_grid(duration, slices)
        current = current_velocity(phase, k, pot.vector).values[0]
        osmotic = osmotic_velocity(rho, k).values[0]
        shape = (times.size, *grid.shape)

        def held(values: np.ndarray) -> np.ndarray:
            return np.broadcast_to(values, shape).copy()

        return cls(
            name,
            grid,
            times,
            held(rho.values),
            held(current),
            held(osmotic),
            spline_potential(grid, pot.total()),
        )


def spline_potential(grid: Grid, values: np.ndarray) -> PotentialFn:
    """Cubic spline through V at the nodes, periodic on rings and periodic lines."""
    axis = grid.axes[0]
    x = grid.coords[0]
    if axis.periodic:
        spline = CubicSpline(np.append(x, x[0] + axis.length), np.append(values, values[0]), bc_type="periodic")
        return lambda q, t: spline((q - x[0]) % axis.length + x[0])
    spline = CubicSpline(x, values)
    return lambda q, t: spline(q)


def _time_grid(duration: float, slices: int) -> np.ndarray:
    if not duration > 0 or slices < 3:
        raise InvalidParameterError("duration", "need a positive duration and at least three slices")
    return np.linspace(0.0, duration, slices)


def ring_plane_wave_history(
    k: PhysicalConstants,
    wavenumber: int = 1,
    *,
    radius: float = 1.0,
    nodes: int = 256,
    duration: float = 1.0,
    slices: int = 1001,
) -> StateHistory:
    """psi ~ exp(i n theta): uniform rho, v = n hbar / (m r), u = 0."""
    grid = ring_grid(nodes, radius)
    times = _time_grid(duration, slices)
    shape = (times.size, nodes)
    rho = np.full(shape, 1.0 / (2.0 * math.pi * radius))
    current = np.full(shape, wavenumber * k.hbar / (k.mass * radius))
    return StateHistory("ring-plane-wave", grid, times, rho, current, np.zeros(shape))


def coherent_state_history(
    k: PhysicalConstants,
    omega: float = 1.0,
    amplitude: float = 2.0,
    *,
    nodes: int = 512,
    duration: float = 1.0,
    slices: int = 1001,
    half_width: float | None = None,
) -> StateHistory:
    """Harmonic coherent state: a ground-state Gaussian whose centre moves as A cos(omega t).

    amplitude = 0 gives the stationary ground state.
    """
    sigma = math.sqrt(k.hbar / (2.0 * k.mass * omega))
    half_width = half_width or abs(amplitude) + 12.0 * sigma
    grid = line_grid(-half_width, half_width, nodes)
    times = _time_grid(duration, slices)
    x = grid.coords[0][None, :]
    centre = amplitude * np.cos(omega * times)[:, None]
    rho = np.exp(-((x - centre) ** 2) / (2.0 * sigma**2)) / math.sqrt(2.0 * math.pi * sigma**2)
    current = np.broadcast_to(-amplitude * omega * np.sin(omega * times)[:, None], rho.shape).copy()
    osmotic = -omega * (x - centre)

    def potential(q: np.ndarray, t: float) -> np.ndarray:
        return 0.5 * k.mass * omega**2 * q**2

    name = "harmonic-ground" if amplitude == 0 else "coherent"
    return StateHistory(name, grid, times, rho, current, osmotic, potential)


def harmonic_ground_history(k: PhysicalConstants, omega: float = 1.0, **kwargs: object) -> StateHistory:
    return coherent_state_history(k, omega, 0.0, **kwargs)  # type: ignore[arg-type]


def free_gaussian_fields(grid: Grid, k: PhysicalConstants, sigma0: float, t: float) -> KinematicFields:
    """v and u of a spreading free Gaussian centred at the origin."""
    x = grid.coords[0]
    spread = (k.hbar / (2.0 * k.mass * sigma0**2)) ** 2
    var = sigma0**2 * (1.0 + spread * t * t)
    v = x * sigma0**2 * spread * t / var
    u = -k.diffusion * x / var
    return KinematicFields.from_parts(VectorField(grid, v[None]), VectorField(grid, u[None]))


def free_gaussian_history(
    k: PhysicalConstants,
    sigma0: float = 1.0,
    *,
    half_width: float = 12.0,
    nodes: int = 512,
    duration: float = 1.0,
    slices: int = 101,
) -> StateHistory:
    grid = line_grid(-half_width, half_width, nodes)
    times = _time_grid(duration, slices)
    x = grid.coords[0]
    rho, current, osmotic = [], [], []
    spread = (k.hbar / (2.0 * k.mass * sigma0**2)) ** 2
    for t in times:
        var = sigma0**2 * (1.0 + spread * t * t)
        rho.append(np.exp(-(x**2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var))
        kin = free_gaussian_fields(grid, k, sigma0, float(t))
        current.append(kin.current.values[0])
        osmotic.append(kin.osmotic.values[0])
    return StateHistory("free-gaussian", grid, times, np.array(rho), np.array(current), np.array(osmotic))

