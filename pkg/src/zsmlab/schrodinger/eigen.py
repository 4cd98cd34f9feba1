"""Stationary states used as oracles: ring, line and central-potential eigenstates."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal, solve_banded

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import ConvergenceError, InvalidParameterError
from zsmlab.core.field import ComplexField, ScalarField
from zsmlab.core.grid import Grid, ring_grid
from zsmlab.core.stencils import radial_laplacian
from zsmlab.schrodinger.operators import apply_hamiltonian, hamiltonian_matrix

LOG = logging.getLogger("zsmlab.schrodinger")


@dataclass(frozen=True, eq=False)
class EigenstateResult:
    quantum_number: float
    energy: float
    psi: ComplexField
    residual: float
    rest_energy_included: bool = False
    iterations: int = 0

    @property
    def grid(self) -> Grid:
        return self.psi.grid

    def with_rest_energy(self, k: PhysicalConstants) -> "EigenstateResult":
        if self.rest_energy_included:
            return self
        return EigenstateResult(
            self.quantum_number, self.energy + k.rest_energy, self.psi, self.residual, True, self.iterations
        )


def ring_eigenstate(n: int, r: float, k: PhysicalConstants, nodes: int = 256) -> EigenstateResult:
    """psi = exp(i n theta)/sqrt(2 pi r), E = n^2 hbar^2 / (2 m r^2)."""
    grid = ring_grid(nodes, r)
    psi = np.exp(1j * n * grid.angle) / math.sqrt(2.0 * math.pi * r)
    energy = n**2 * k.hbar**2 / (2.0 * k.mass * r**2)
    h_psi = apply_hamiltonian(grid, np.zeros(grid.shape), k, psi)
    residual = float(np.max(np.abs(h_psi - energy * psi)))
    return EigenstateResult(n, energy, ComplexField(grid, psi), residual)


def ring_spectrum(grid: Grid, k: PhysicalConstants) -> np.ndarray:
    """All eigenvalues of the discrete free ring Hamiltonian, ascending."""
    if grid.topology != "ring":
        raise InvalidParameterError("grid", "ring_spectrum needs a ring grid")
    ham = hamiltonian_matrix(grid, np.zeros(grid.shape), k).toarray()
    return eigh(ham, eigvals_only=True)


def _symmetric_tridiagonal(ham: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the similarity-symmetrized tridiagonal matrix."""
    d = np.diag(ham).copy()
    upper = np.diag(ham, 1)
    lower = np.diag(ham, -1)
    e = np.sign(upper) * np.sqrt(upper * lower)
    return d, e


def line_eigenstate(potential: ScalarField, k: PhysicalConstants, level: int = 0) -> EigenstateResult:
    """level-th discrete eigenstate of -(hbar^2/2m) lap + V on a line grid."""
    grid = potential.grid
    if grid.topology != "line":
        raise InvalidParameterError("grid", "line_eigenstate needs a line grid")
    ham = hamiltonian_matrix(grid, potential.values, k).toarray()
    keep = np.ones(grid.size, dtype=bool)
    if grid.axes[0].boundary == "absorbing":
        keep[[0, -1]] = False
    sub = ham[np.ix_(keep, keep)]
    d, e = _symmetric_tridiagonal(sub)
    energies, vecs = eigh_tridiagonal(d, e, select="i", select_range=(level, level))
    y = vecs[:, 0]
    # undo the similarity transform: y = W^(1/2) psi
    weights = grid.weights[keep]
    interior = y / np.sqrt(weights / weights.max())
    psi = np.zeros(grid.size)
    psi[keep] = interior
    if psi.sum() < 0:
        psi = -psi
    psi /= math.sqrt(float(np.sum(grid.weights * psi**2)))
    energy = float(energies[0])
    residual = float(np.max(np.abs(ham @ psi - energy * psi)))
    return EigenstateResult(level, energy, ComplexField(grid, psi.astype(complex)), residual)


@dataclass(frozen=True)
class RadialSolution:
    radius: np.ndarray
    profile: np.ndarray
    energy: float
    residual: float
    iterations: int


def radial_ground_state(
    grid: Grid,
    radial_potential: np.ndarray,
    winding: float,
    k: PhysicalConstants,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> RadialSolution:
    """Lowest radial state at (possibly non-integer) angular winding.

    Solves -(hbar^2/2m)[(1/r)(r R')' - w^2 R / r^2] + V R = E R on the cell-centred
    radius with the same flux-form stencil the field operators use. Returns R
    normalized so that the integral of R^2 r dr is 1.
    """
    if not grid.is_polar:
        raise InvalidParameterError("grid", "radial solve needs a disk-polar grid")
    if winding < 0:
        raise InvalidParameterError("m_winding", "must be non-negative")
    axis = grid.axes[0]
    r = axis.coords()
    h = axis.spacing
    coef = k.hbar**2 / (2.0 * k.mass)
    lap = radial_laplacian(axis)
    # symmetrize with sqrt(r): S = diag(sqrt r) L diag(1/sqrt r)
    sqrt_r = np.sqrt(r)
    diag = -coef * lap.diagonal() + np.asarray(radial_potential, dtype=float) + coef * winding**2 / r**2
    off = -coef * lap.diagonal(1) * sqrt_r[:-1] / sqrt_r[1:]
    estimate = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, 0))[0]

    v_eff = np.asarray(radial_potential, dtype=float) + coef * winding**2 / r**2
    seed_at = int(np.argmin(v_eff))
    y = np.exp(-(((r - r[seed_at]) / (8.0 * h)) ** 2)) + 1e-3
    shift = estimate - 1e-8 * (1.0 + abs(estimate))
    banded = np.zeros((3, r.size))
    banded[0, 1:] = off
    banded[1] = diag - shift
    banded[2, :-1] = off

    def apply(vec: np.ndarray) -> np.ndarray:
        out = diag * vec
        out[:-1] += off * vec[1:]
        out[1:] += off * vec[:-1]
        return out

    residual = math.inf
    energy = estimate
    for iteration in range(1, max_iter + 1):
        y = solve_banded((1, 1), banded, y)
        y /= math.sqrt(float(np.sum(y**2) * h))
        hy = apply(y)
        energy = float(np.sum(y * hy) * h)
        residual = float(np.max(np.abs(hy - energy * y) / sqrt_r))
        if residual <= tol:
            break
    else:
        raise ConvergenceError(residual, f"radial inverse iteration (winding {winding})")
    if y.sum() < 0:
        y = -y
    LOG.debug(
        "eigen_converged=%s",
        json.dumps({"winding": winding, "energy": energy, "residual": residual, "iterations": iteration}),
    )
    return RadialSolution(r, y / sqrt_r, energy, residual, iteration)


def radial_values(field: ScalarField) -> np.ndarray:
    grid = field.grid
    values = field.values
    if not np.allclose(values, values[:, :1], rtol=1e-12, atol=1e-12 * (1.0 + np.abs(values).max())):
        raise InvalidParameterError("V", "potential is not radial")
    return values[:, 0]


def state_from_radial(grid: Grid, profile: np.ndarray, winding: float) -> ComplexField:
    phi = grid.mesh[1]
    return ComplexField(grid, profile[:, None] * np.exp(1j * winding * phi) / math.sqrt(2.0 * math.pi))


def disk_residual(grid: Grid, potential: np.ndarray, k: PhysicalConstants, psi: np.ndarray, energy: float) -> float:
    """max |H psi - E psi| on a disk, with d^2/dphi^2 taken spectrally along the angle."""
    axis_r, axis_phi = grid.axes
    r = axis_r.coords()[:, None]
    waves = np.fft.fftfreq(axis_phi.nodes, d=1.0 / axis_phi.nodes)
    angular = np.fft.ifft(-(waves**2) * np.fft.fft(psi, axis=1), axis=1)
    radial = radial_laplacian(axis_r) @ psi
    h_psi = -(k.hbar**2 / (2.0 * k.mass)) * (radial + angular / r**2) + potential * psi
    return float(np.max(np.abs(h_psi - energy * psi)))


def central_eigenstate(
    potential: ScalarField,
    m_winding: int,
    k: PhysicalConstants,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> EigenstateResult:
    """Lowest state psi_m = R_m(r) exp(i m phi) of a radial potential on a disk."""
    if int(m_winding) != m_winding or m_winding < 0:
        raise InvalidParameterError("m_winding", "must be a non-negative integer")
    grid = potential.grid
    if not grid.is_polar:
        raise InvalidParameterError("grid", "central_eigenstate needs a disk-polar grid")
    sol = radial_ground_state(grid, radial_values(potential), float(m_winding), k, tol, max_iter)
    psi = state_from_radial(grid, sol.profile, float(m_winding))
    residual = disk_residual(grid, potential.values, k, psi.values, sol.energy)
    return EigenstateResult(int(m_winding), sol.energy, psi, residual, False, sol.iterations)
