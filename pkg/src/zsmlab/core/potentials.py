"""External potentials on a grid.

Gravitational and electric parts are stored as energies (m*Phi_g, e*Phi_e).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.field import ScalarField, VectorField
from zsmlab.core.grid import Grid
from zsmlab.core.stencils import curl


@dataclass(frozen=True, eq=False)
class Potentials:
    grid: Grid
    scalar: ScalarField | None = None
    gravitational: ScalarField | None = None
    electric: ScalarField | None = None
    vector: VectorField | None = None
    # piecewise-constant scalar frames: (start time, V)
    frames: tuple[tuple[float, ScalarField], ...] = ()

    def __post_init__(self) -> None:
        for part in (self.scalar, self.gravitational, self.electric, self.vector):
            if part is not None:
                self.grid.require_same(part.grid)
        for _, frame in self.frames:
            self.grid.require_same(frame.grid)
        times = [t for t, _ in self.frames]
        if times != sorted(times):
            raise ValueError("potential frames must be sorted by time")

    @property
    def is_time_dependent(self) -> bool:
        return bool(self.frames)

    def at(self, t: float) -> "Potentials":
        """Static snapshot at time t."""
        if not self.frames:
            return self
        current = self.scalar
        for start, frame in self.frames:
            if start <= t:
                current = frame
        return Potentials(self.grid, current, self.gravitational, self.electric, self.vector)

    def total(self, t: float = 0.0) -> np.ndarray:
        """V + m*Phi_g + e*Phi_e at time t (energy units)."""
        snap = self.at(t)
        out = np.zeros(self.grid.shape)
        for part in (snap.scalar, snap.gravitational, snap.electric):
            if part is not None:
                out = out + part.values
        return out

    def magnetic(self) -> np.ndarray | None:
        """B_z = curl A, derived on demand."""
        if self.vector is None or self.grid.ndim != 2:
            return None
        return curl(self.grid, self.vector.values)

    def with_vector(self, vector: VectorField | None) -> "Potentials":
        return Potentials(self.grid, self.scalar, self.gravitational, self.electric, vector, self.frames)


def free(grid: Grid) -> Potentials:
    return Potentials(grid)


def radial_potential(grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> Potentials:
    return Potentials(grid, scalar=ScalarField(grid, fn(grid.radial)))


def harmonic(grid: Grid, k: PhysicalConstants, omega: float, center: float = 0.0) -> Potentials:
    if grid.topology == "line":
        x = grid.coords[0] - center
        return Potentials(grid, scalar=ScalarField(grid, 0.5 * k.mass * omega**2 * x**2))
    return radial_potential(grid, lambda r: 0.5 * k.mass * omega**2 * r**2)


def coulomb(grid: Grid, strength: float, softening: float = 0.0) -> Potentials:
    """V = -strength / sqrt(r^2 + softening^2)."""
    return radial_potential(grid, lambda r: -strength / np.sqrt(r**2 + softening**2))


def uniform_gravity(grid: Grid, k: PhysicalConstants, g: float, axis: int = 0) -> Potentials:
    x = grid.cartesian[axis]
    return Potentials(grid, gravitational=ScalarField(grid, k.mass * g * x))


def uniform_electric(grid: Grid, k: PhysicalConstants, field_strength: float, axis: int = 0) -> Potentials:
    x = grid.cartesian[axis]
    return Potentials(grid, electric=ScalarField(grid, -k.charge * field_strength * x))


def uniform_magnetic(grid: Grid, b_field: float, base: Potentials | None = None) -> Potentials:
    """Symmetric gauge A = (B/2) z x r."""
    if grid.ndim != 2:
        raise ValueError("uniform magnetic field needs a 2-D grid")
    if grid.is_polar:
        r = grid.mesh[0]
        values = np.stack([np.zeros_like(r), 0.5 * b_field * r])
    else:
        x, y = grid.mesh
        values = np.stack([-0.5 * b_field * y, 0.5 * b_field * x])
    pot = base if base is not None else Potentials(grid)
    return pot.with_vector(VectorField(grid, values))
