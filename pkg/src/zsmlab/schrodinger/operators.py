"""Sparse Hamiltonians and Cayley (Crank-Nicolson) propagators."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.grid import Grid
from zsmlab.core.stencils import axis_laplacian, radial_laplacian, laplacian_matrix, pin_nodes


def dirichlet_nodes(grid: Grid) -> np.ndarray:
    """Flattened mask of nodes held at zero by the solvers."""
    if grid.is_polar:
        return np.zeros(grid.size, dtype=bool)
    return grid.boundary_nodes("absorbing").ravel()


def hamiltonian_matrix(grid: Grid, potential: np.ndarray, k: PhysicalConstants) -> sp.csr_matrix:
    """H = -(hbar^2/2m) lap + V on the flattened grid (solver form)."""
    kinetic = -(k.hbar**2 / (2.0 * k.mass)) * laplacian_matrix(grid, dirichlet=True)
    ham = kinetic + sp.diags(np.asarray(potential, dtype=float).ravel())
    return pin_nodes(ham, dirichlet_nodes(grid))


def kinetic_splitting(grid: Grid, k: PhysicalConstants) -> list[sp.csr_matrix]:
    """Per-axis kinetic operators whose sum is the solver Laplacian term."""
    coef = -(k.hbar**2 / (2.0 * k.mass))
    if grid.ndim == 1:
        return [pin_nodes(coef * laplacian_matrix(grid, dirichlet=True), dirichlet_nodes(grid))]
    a0, a1 = grid.axes
    i0 = sp.identity(a0.nodes, format="csr")
    i1 = sp.identity(a1.nodes, format="csr")
    if grid.is_polar:
        r = a0.coords()
        parts = [
            sp.kron(radial_laplacian(a0), i1),
            sp.kron(sp.diags(1.0 / r**2), axis_laplacian(a1, True)),
        ]
    else:
        parts = [sp.kron(axis_laplacian(a0, True), i1), sp.kron(i0, axis_laplacian(a1, True))]
    pinned = dirichlet_nodes(grid)
    return [pin_nodes(coef * part, pinned) for part in parts]


class CayleyStep:
    """psi -> (1 + i tau K / 2 hbar)^-1 (1 - i tau K / 2 hbar) psi."""

    def __init__(self, operator: sp.spmatrix, tau: float, hbar: float):
        n = operator.shape[0]
        eye = sp.identity(n, dtype=complex, format="csc")
        half = (0.5j * tau / hbar) * sp.csc_matrix(operator, dtype=complex)
        self._lu = splu((eye + half).tocsc())
        self._rhs = (eye - half).tocsr()
        self.tau = tau

    def __call__(self, vec: np.ndarray) -> np.ndarray:
        return self._lu.solve(self._rhs @ vec)


def apply_hamiltonian(grid: Grid, potential: np.ndarray, k: PhysicalConstants, psi: np.ndarray) -> np.ndarray:
    return (hamiltonian_matrix(grid, potential, k) @ psi.ravel()).reshape(grid.shape)


def expectation_energy(grid: Grid, potential: np.ndarray, k: PhysicalConstants, psi: np.ndarray) -> float:
    """<psi|H|psi> with the grid quadrature weights."""
    h_psi = apply_hamiltonian(grid, potential, k, psi)
    return float(np.real(np.sum(grid.weights * np.conj(psi) * h_psi)))
