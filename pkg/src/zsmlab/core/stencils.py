"""Finite-difference operators shared by the field, solver and residual code.

Arrays are indexed like the grid (axis 0 first). Vector arrays carry the
component index in front: shape (ndim, *grid.shape). On the disk the
components are (radial, azimuthal).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from zsmlab.core.grid import Axis, Grid


def _derivative_1d(f: np.ndarray, axis: Axis, ax: int) -> np.ndarray:
    h = axis.spacing
    if axis.periodic:
        return (np.roll(f, -1, axis=ax) - np.roll(f, 1, axis=ax)) / (2.0 * h)
    f = np.moveaxis(f, ax, 0)
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    return np.moveaxis(out, 0, ax)


def partial(grid: Grid, f: np.ndarray, ax: int) -> np.ndarray:
    """Coordinate derivative along one axis."""
    return _derivative_1d(np.asarray(f), grid.axes[ax], ax)


def gradient(grid: Grid, f: np.ndarray) -> np.ndarray:
    scales = grid.metric_scale()
    return np.stack([partial(grid, f, ax) * scales[ax] for ax in range(grid.ndim)])


def divergence(grid: Grid, vec: np.ndarray) -> np.ndarray:
    if grid.is_polar:
        r = grid.mesh[0]
        return partial(grid, r * vec[0], 0) / r + partial(grid, vec[1], 1) / r
    return sum(partial(grid, vec[ax], ax) for ax in range(grid.ndim))


def curl(grid: Grid, vec: np.ndarray) -> np.ndarray:
    """Out-of-plane curl of a 2-D vector field."""
    if grid.ndim != 2:
        raise ValueError("curl needs a 2-D grid")
    if grid.is_polar:
        r = grid.mesh[0]
        return (partial(grid, r * vec[1], 0) - partial(grid, vec[0], 1)) / r
    return partial(grid, vec[1], 0) - partial(grid, vec[0], 1)


def axis_laplacian(axis: Axis, dirichlet: bool) -> sp.csr_matrix:
    n = axis.nodes
    h2 = axis.spacing**2
    main = np.full(n, -2.0)
    off = np.ones(n - 1)
    mat = sp.diags([off, main, off], [-1, 0, 1], shape=(n, n), format="lil")
    if axis.periodic:
        mat[0, n - 1] = 1.0
        mat[n - 1, 0] = 1.0
    elif axis.boundary == "reflecting":
        # mirror ghost f[-1] = f[1]
        mat[0, 1] = 2.0
        mat[n - 1, n - 2] = 2.0
    elif not dirichlet:
        mat[0, :4] = [2.0, -5.0, 4.0, -1.0]
        mat[n - 1, n - 4 :] = [-1.0, 4.0, -5.0, 2.0]
    return (mat / h2).tocsr()


def radial_laplacian(axis: Axis) -> sp.csr_matrix:
    """(1/r) d/dr (r d/dr) in flux form on the cell-centred radius."""
    n = axis.nodes
    h = axis.spacing
    r = axis.coords()
    inner = r - 0.5 * h
    outer = r + 0.5 * h
    inner[0] = 0.0
    main = -(inner + outer)
    if axis.boundary == "absorbing":
        # ghost f[n] = -f[n-1] puts the zero on the r = R face
        main[-1] = -(inner[-1] + 2.0 * outer[-1])
    else:
        main[-1] = -inner[-1]
    lower = inner[1:]
    upper = outer[:-1]
    mat = sp.diags([lower, main, upper], [-1, 0, 1], shape=(n, n))
    return (sp.diags(1.0 / (r * h * h)) @ mat).tocsr()


def laplacian_matrix(grid: Grid, dirichlet: bool = False) -> sp.csr_matrix:
    """Sparse Laplacian on the flattened (C order) grid.

    dirichlet=True pins absorbing endpoint nodes to zero (solver form);
    otherwise they get a one-sided second-order stencil (evaluation form).
    """
    if grid.ndim == 1:
        return axis_laplacian(grid.axes[0], dirichlet)
    a0, a1 = grid.axes
    i0 = sp.identity(a0.nodes, format="csr")
    i1 = sp.identity(a1.nodes, format="csr")
    if grid.is_polar:
        r = a0.coords()
        lap = sp.kron(radial_laplacian(a0), i1) + sp.kron(sp.diags(1.0 / r**2), axis_laplacian(a1, dirichlet))
    else:
        lap = sp.kron(axis_laplacian(a0, dirichlet), i1) + sp.kron(i0, axis_laplacian(a1, dirichlet))
    lap = lap.tocsr()
    if dirichlet and not grid.is_polar:
        lap = pin_nodes(lap, grid.boundary_nodes("absorbing").ravel())
    return lap


def pin_nodes(mat: sp.spmatrix, pinned: np.ndarray) -> sp.csr_matrix:
    """Zero rows and columns of pinned nodes."""
    if not pinned.any():
        return sp.csr_matrix(mat)
    keep = sp.diags((~pinned).astype(float))
    return (keep @ mat @ keep).tocsr()


def laplacian(grid: Grid, f: np.ndarray) -> np.ndarray:
    f = np.asarray(f)
    flat = laplacian_matrix(grid) @ f.reshape(-1)
    return np.asarray(flat).reshape(grid.shape)
