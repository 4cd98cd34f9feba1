"""Circular Coulomb orbits of the classical zbw particle.

Force balance m v^2 / r = e^2 / (4 pi eps0 r^2) with the loop condition
m v r = n hbar gives

    r_n = 4 pi eps0 hbar^2 n^2 / (m e^2),    E_n = -e^2 / (8 pi eps0 r_n),    L = n hbar.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from zsmlab.core.constants import CODATA_2018, PhysicalConstants
from zsmlab.core.errors import InvalidParameterError, UnsupportedFeatureError
from zsmlab.core.io import write_table_csv
from zsmlab.zbw.phase import PathPotentials, PathSample

LOG = logging.getLogger("zsmlab.zbw")

BOHR_TABLE_HEADER = ["n", "r_n_m", "E_n_eV", "L_over_hbar"]


@dataclass(frozen=True)
class BohrOrbit:
    n: int
    radius: float
    energy: float
    angular_momentum: float
    speed: float

    @property
    def energy_ev(self) -> float:
        return self.energy / CODATA_2018["electron_volt"]


def coulomb_strength(k: PhysicalConstants) -> float:
    """e^2 / (4 pi eps0) in SI; e^2 in natural (Gaussian-style) units."""
    if k.unit_system == "SI":
        if k.epsilon0 is None:
            raise InvalidParameterError("epsilon0", "SI Coulomb strength needs eps0")
        return k.charge**2 / (4.0 * math.pi * k.epsilon0)
    return k.charge**2


def bohr_orbit(n: int, k: PhysicalConstants) -> BohrOrbit:
    if k.unit_system != "SI":
        raise UnsupportedFeatureError("Bohr orbits are tabulated in SI units only")
    if n < 1:
        raise InvalidParameterError("n", "must be >= 1")
    strength = coulomb_strength(k)
    radius = k.hbar**2 * n * n / (k.mass * strength)
    energy = -strength / (2.0 * radius)
    return BohrOrbit(
        n=n,
        radius=radius,
        energy=energy,
        angular_momentum=n * k.hbar,
        speed=n * k.hbar / (k.mass * radius),
    )


def bohr_table(k: PhysicalConstants, n_max: int = 10) -> list[BohrOrbit]:
    return [bohr_orbit(n, k) for n in range(1, n_max + 1)]


def write_bohr_table(orbits: list[BohrOrbit], k: PhysicalConstants, path: Path) -> Path:
    rows = np.array([[o.n, o.radius, o.energy_ev, o.angular_momentum / k.hbar] for o in orbits])
    return write_table_csv(path, BOHR_TABLE_HEADER, rows)


def circular_orbit_path(radius: float, speed: float, samples: int = 8192, turns: float = 1.0) -> PathSample:
    """Analytic uniform circular motion, counter-clockwise from (radius, 0)."""
    if radius <= 0 or speed <= 0:
        raise InvalidParameterError("orbit", "radius and speed must be positive")
    omega = speed / radius
    times = np.linspace(0.0, turns * 2.0 * math.pi / omega, samples + 1)
    angle = omega * times
    positions = radius * np.column_stack([np.cos(angle), np.sin(angle)])
    velocities = speed * np.column_stack([-np.sin(angle), np.cos(angle)])
    return PathSample(times, positions, velocities)


def coulomb_path_potentials(path: PathSample, strength: float) -> PathPotentials:
    """V = -strength / |q| sampled along the path."""
    return PathPotentials(scalar=-strength / np.linalg.norm(path.positions, axis=1))


def integrate_orbit(
    radius: float,
    speed: float,
    k: PhysicalConstants,
    *,
    strength: float | None = None,
    periods: float = 1.0,
    steps: int = 8192,
) -> PathSample:
    """Velocity Verlet under the attractive force strength / r^2.

    Starts at (radius, 0) moving along +y; the step is chosen so `steps`
    samples span `periods` periods of the circular orbit at that radius.
    """
    if radius <= 0 or speed <= 0 or steps < 2:
        raise InvalidParameterError("orbit", "radius, speed and steps must be positive")
    strength = coulomb_strength(k) if strength is None else strength
    dt = periods * 2.0 * math.pi * radius / speed / steps
    scale = strength / k.mass

    def accel(q: np.ndarray) -> np.ndarray:
        r = math.hypot(q[0], q[1])
        return -scale * q / r**3

    pos = np.empty((steps + 1, 2))
    vel = np.empty((steps + 1, 2))
    pos[0] = (radius, 0.0)
    vel[0] = (0.0, speed)
    a = accel(pos[0])
    for i in range(steps):
        half = vel[i] + 0.5 * dt * a
        pos[i + 1] = pos[i] + dt * half
        a = accel(pos[i + 1])
        vel[i + 1] = half + 0.5 * dt * a
    times = dt * np.arange(steps + 1)
    LOG.debug(
        "orbit_integrated=%s",
        json.dumps({"radius": radius, "speed": speed, "steps": steps, "end_gap": float(np.linalg.norm(pos[-1] - pos[0]))}),
    )
    return PathSample(times, pos, vel)
