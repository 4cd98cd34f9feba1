"""Linear and nonlinear-classical Schrodinger time evolution."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import ndimage

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import NodeEncounteredError, NormalizationError, UnsupportedFeatureError
from zsmlab.core.field import ComplexField, ScalarField
from zsmlab.core.grid import Grid
from zsmlab.core.io import append_field, dump_field, write_table_csv
from zsmlab.core.potentials import Potentials
from zsmlab.core.stencils import laplacian
from zsmlab.fields.kinematics import interior_node_region
from zsmlab.schrodinger.operators import (
    CayleyStep,
    dirichlet_nodes,
    expectation_energy,
    hamiltonian_matrix,
    kinetic_splitting,
)

LOG = logging.getLogger("zsmlab.schrodinger")

NORM_TOLERANCE = 1e-8


@dataclass
class EvolutionTrajectory:
    grid: Grid
    dt: float
    stride: int
    times: list[float] = field(default_factory=list)
    frames: list[ComplexField] = field(default_factory=list)
    norms: list[float] = field(default_factory=list)
    energies: list[float] = field(default_factory=list)
    substeps: int = 0

    @property
    def final(self) -> ComplexField:
        return self.frames[-1]

    def record(self, t: float, psi: ComplexField, energy: float) -> None:
        self.times.append(t)
        self.frames.append(psi)
        self.norms.append(psi.norm())
        self.energies.append(energy)

    def write_summary(self, path: Path) -> Path:
        rows = np.column_stack([self.times, self.norms, self.energies])
        return write_table_csv(path, ["t", "norm", "energy"], rows)

    def write_frames(self, path: Path) -> Path:
        dump_field(self.frames[0], path)
        with path.open("ab") as fh:
            for frame in self.frames[1:]:
                append_field(frame, fh)
        return path


class LinearPropagator:
    """One time step of i hbar psi_t = (K + V) psi.

    1-D: a single Cayley factor of the full Hamiltonian.
    2-D: Strang splitting, V as exact half-step phases around
    Cay(K_0, dt/2) Cay(K_1, dt) Cay(K_0, dt/2).
    """

    def __init__(self, grid: Grid, potential: np.ndarray, k: PhysicalConstants, dt: float):
        self.grid = grid
        self.dt = dt
        self.pinned = dirichlet_nodes(grid)
        if grid.ndim == 1:
            self._steps = [CayleyStep(hamiltonian_matrix(grid, potential, k), dt, k.hbar)]
            self._half_phase = None
        else:
            k0, k1 = kinetic_splitting(grid, k)
            half = CayleyStep(k0, 0.5 * dt, k.hbar)
            self._steps = [half, CayleyStep(k1, dt, k.hbar), half]
            phase = np.exp(-0.5j * dt * np.asarray(potential).ravel() / k.hbar)
            phase[self.pinned] = 1.0
            self._half_phase = phase

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        vec = psi.ravel()
        if self._half_phase is not None:
            vec = self._half_phase * vec
        for step in self._steps:
            vec = step(vec)
        if self._half_phase is not None:
            vec = self._half_phase * vec
        vec[self.pinned] = 0.0
        return vec.reshape(self.grid.shape)


def _check_inputs(psi0: ComplexField, pot: Potentials) -> None:
    pot.grid.require_same(psi0.grid)
    if pot.vector is not None:
        raise UnsupportedFeatureError("vector potentials are not supported in time evolution")
    norm = psi0.norm()
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise NormalizationError(f"initial state has norm {norm:.12f}, expected 1")


class _PropagatorCache:
    def __init__(self, pot: Potentials, k: PhysicalConstants):
        self.pot = pot
        self.k = k
        self._cache: dict[tuple[int, float], LinearPropagator] = {}

    def get(self, t: float, dt: float) -> tuple[LinearPropagator, np.ndarray]:
        snap = self.pot.at(t)
        key = (id(snap.scalar), dt)
        total = snap.total()
        if key not in self._cache:
            self._cache[key] = LinearPropagator(self.pot.grid, total, self.k, dt)
        return self._cache[key], total


def evolve_linear(
    psi0: ComplexField,
    pot: Potentials,
    dt: float,
    steps: int,
    k: PhysicalConstants,
    *,
    rest_energy: bool = False,
    stride: int = 1,
    on_frame: Callable[[float, ComplexField], None] | None = None,
) -> EvolutionTrajectory:
    """Crank-Nicolson evolution; dt < 0 runs backwards in time."""
    _check_inputs(psi0, pot)
    grid = psi0.grid
    cache = _PropagatorCache(pot, k)
    rest_phase = np.exp(-1j * k.rest_energy * dt / k.hbar) if rest_energy else 1.0
    offset = k.rest_energy if rest_energy else 0.0

    psi = psi0.values.copy()
    psi.reshape(-1)[dirichlet_nodes(grid)] = 0.0
    traj = EvolutionTrajectory(grid, dt, stride)
    t = 0.0
    _, total = cache.get(t, dt)
    traj.record(t, ComplexField(grid, psi), expectation_energy(grid, total, k, psi) + offset)
    for step in range(1, steps + 1):
        prop, total = cache.get(t, dt)
        psi = prop(psi) * rest_phase
        t = step * dt
        if step % stride == 0 or step == steps:
            frame = ComplexField(grid, psi)
            traj.record(t, frame, expectation_energy(grid, total, k, psi) + offset)
            if on_frame is not None:
                on_frame(t, frame)
    return traj


def classical_correction(
    grid: Grid,
    psi: np.ndarray,
    k: PhysicalConstants,
    support_floor: float,
) -> np.ndarray:
    """Q_c = (hbar^2/2m) lap|psi| / |psi| on the support, zero outside."""
    amp = np.abs(psi)
    rho = amp**2
    support = rho >= support_floor * float(rho.max())
    lap = laplacian(grid, amp)
    out = np.zeros(grid.shape)
    out[support] = (k.hbar**2 / (2.0 * k.mass)) * lap[support] / amp[support]
    return out


def support_components(grid: Grid, support: np.ndarray) -> int:
    """Connected components of a bool mask, joining across periodic seams."""
    labels, count = ndimage.label(support)
    if count <= 1:
        return count
    parent = list(range(count + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for ax, axis in enumerate(grid.axes):
        if not axis.periodic:
            continue
        first = np.take(labels, 0, axis=ax)
        last = np.take(labels, -1, axis=ax)
        for a, b in zip(np.ravel(first), np.ravel(last)):
            if a and b:
                parent[find(int(a))] = find(int(b))
    return len({find(i) for i in range(1, count + 1)})


def check_node_free(grid: Grid, psi: np.ndarray, node_floor: float, t: float) -> None:
    """Raise NodeEncounteredError(t) if rho has a node inside its support.

    A node is a sub-floor component away from every non-periodic edge, or a
    gap that splits the support. Fully periodic grids only get the split test.
    """
    rho = np.abs(psi) ** 2
    if any(not axis.periodic for axis in grid.axes):
        if interior_node_region(ScalarField(grid, rho), node_floor).any():
            raise NodeEncounteredError(t)
    if support_components(grid, rho >= node_floor * float(rho.max())) > 1:
        raise NodeEncounteredError(t)


def evolve_nonlinear_classical(
    psi0: ComplexField,
    pot: Potentials,
    dt: float,
    steps: int,
    k: PhysicalConstants,
    *,
    support_floor: float = 1e-10,
    node_floor: float = 1e-6,
    max_phase: float = 0.5,
    rest_energy: bool = False,
    stride: int = 1,
) -> EvolutionTrajectory:
    """Classical HJ + continuity pair in psi form.

    Each step is N(dt/2) L(dt) N(dt/2): L the linear propagator, N the phase
    exp(-i Q_c tau / hbar) that cancels the quantum kinetic term.
    """
    _check_inputs(psi0, pot)
    grid = psi0.grid
    cache = _PropagatorCache(pot, k)
    offset = k.rest_energy if rest_energy else 0.0

    psi = psi0.values.copy()
    psi.reshape(-1)[dirichlet_nodes(grid)] = 0.0
    check_node_free(grid, psi, node_floor, 0.0)
    traj = EvolutionTrajectory(grid, dt, stride)
    t = 0.0
    _, total = cache.get(t, dt)
    traj.record(t, ComplexField(grid, psi), expectation_energy(grid, total, k, psi) + offset)
    for step in range(1, steps + 1):
        q = classical_correction(grid, psi, k, support_floor)
        peak_phase = float(np.max(np.abs(q))) * dt / (2.0 * k.hbar)
        nsub = max(1, math.ceil(peak_phase / max_phase))
        if nsub > 1:
            traj.substeps += nsub - 1
            LOG.warning("nonlinear phase %.3g rad per half step; using %d substeps at t=%.6g", peak_phase, nsub, t)
        tau = dt / nsub
        for sub in range(nsub):
            if sub:
                q = classical_correction(grid, psi, k, support_floor)
            psi = psi * np.exp(-0.5j * tau * q / k.hbar)
            prop, total = cache.get(t, tau)
            psi = prop(psi)
            q = classical_correction(grid, psi, k, support_floor)
            psi = psi * np.exp(-0.5j * tau * q / k.hbar)
        if rest_energy:
            psi = psi * np.exp(-1j * k.rest_energy * dt / k.hbar)
        t = step * dt
        check_node_free(grid, psi, node_floor, t)
        if step % stride == 0 or step == steps:
            traj.record(t, ComplexField(grid, psi), expectation_energy(grid, total, k, psi) + offset)
    LOG.info(
        "nonlinear_run=%s",
        json.dumps({"steps": steps, "dt": dt, "substeps": traj.substeps}, ensure_ascii=True),
    )
    return traj
