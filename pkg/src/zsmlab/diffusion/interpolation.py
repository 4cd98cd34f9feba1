"""Grid-to-particle interpolation and boundary handling for particle positions.

Particles live in Cartesian coordinates on 2-D grids (x, y) and in the axis
coordinate on 1-D grids (x on a line, arc length on a ring).
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from zsmlab.core.errors import InvalidParameterError
from zsmlab.core.field import ScalarField, VectorField
from zsmlab.core.grid import Grid


def fill_masked(values: np.ndarray, mask: np.ndarray | None) -> np.ndarray:
    """Replace masked entries with the value at the nearest unmasked node."""
    if mask is None or not mask.any():
        return values
    _, nearest = ndimage.distance_transform_edt(mask, return_indices=True)
    if values.ndim == mask.ndim:
        return values[tuple(nearest)]
    return np.stack([comp[tuple(nearest)] for comp in values])


def to_grid_coords(grid: Grid, positions: np.ndarray) -> np.ndarray:
    """Cartesian particle positions -> grid axis coordinates."""
    if grid.is_polar:
        x, y = positions[:, 0], positions[:, 1]
        return np.column_stack([np.hypot(x, y), np.mod(np.arctan2(y, x), 2.0 * np.pi)])
    return positions


def _fractional_index(grid: Grid, coords: np.ndarray, check: bool) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Per axis: lower index, upper index, weight of the upper node."""
    out = []
    for ax, axis in enumerate(grid.axes):
        c = coords[:, ax]
        h = axis.spacing
        if axis.periodic:
            s = np.mod(c - axis.start, axis.length) / h
            lo = np.floor(s).astype(np.int64) % axis.nodes
            frac = s - np.floor(s)
            hi = (lo + 1) % axis.nodes
        else:
            if check and (np.any(c < axis.start - 1e-12 * axis.length) or np.any(c > axis.stop + 1e-12 * axis.length)):
                raise InvalidParameterError("positions", "drift lookup off-grid")
            offset = 0.5 if axis.cell_centred else 0.0
            s = np.clip((c - axis.start) / h - offset, 0.0, axis.nodes - 1)
            lo = np.minimum(np.floor(s).astype(np.int64), axis.nodes - 2)
            frac = s - lo
            hi = lo + 1
        out.append((lo, hi, frac))
    return out


def interpolate(grid: Grid, values: np.ndarray, positions: np.ndarray, check: bool = True) -> np.ndarray:
    """Linear (1-D) or bilinear (2-D) interpolation of node values at particle positions.

    `values` is (*shape) or (ncomp, *shape); the result is (N,) or (N, ncomp).
    """
    coords = to_grid_coords(grid, positions)
    idx = _fractional_index(grid, coords, check)
    vector = values.ndim == grid.ndim + 1
    stack = values if vector else values[None]
    if grid.ndim == 1:
        lo, hi, f = idx[0]
        out = stack[:, lo] * (1.0 - f) + stack[:, hi] * f
    else:
        (i0, i1, fx), (j0, j1, fy) = idx
        out = (
            stack[:, i0, j0] * (1.0 - fx) * (1.0 - fy)
            + stack[:, i1, j0] * fx * (1.0 - fy)
            + stack[:, i0, j1] * (1.0 - fx) * fy
            + stack[:, i1, j1] * fx * fy
        )
    return out.T if vector else out[0]


def cartesian_components(field: VectorField) -> np.ndarray:
    """Vector components in the Cartesian frame (polar fields are rotated)."""
    grid = field.grid
    values = fill_masked(field.values, field.mask)
    if not grid.is_polar:
        return values
    phi = grid.mesh[1]
    vr, vphi = values
    return np.stack([vr * np.cos(phi) - vphi * np.sin(phi), vr * np.sin(phi) + vphi * np.cos(phi)])


class DriftInterpolator:
    """Evaluates a drift VectorField at particle positions (Cartesian output)."""

    def __init__(self, drift: VectorField):
        self.grid = drift.grid
        self._values = cartesian_components(drift)

    def __call__(self, positions: np.ndarray) -> np.ndarray:
        return interpolate(self.grid, self._values, positions)


def scalar_at(field: ScalarField, positions: np.ndarray) -> np.ndarray:
    return interpolate(field.grid, field.values, positions, check=False)


def domain_sample_box(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper Cartesian corners of the grid's domain."""
    if grid.is_polar:
        r = grid.axes[0].stop
        return np.array([-r, -r]), np.array([r, r])
    lo = np.array([axis.start for axis in grid.axes])
    hi = np.array([axis.stop for axis in grid.axes])
    return lo, hi


def apply_boundaries(grid: Grid, positions: np.ndarray, alive: np.ndarray) -> np.ndarray:
    """Wrap, reflect or absorb particles in place; returns the newly absorbed mask."""
    absorbed = np.zeros(alive.shape, dtype=bool)
    if grid.is_polar:
        radius = grid.axes[0].stop
        r = np.hypot(positions[:, 0], positions[:, 1])
        out = alive & (r > radius)
        if grid.axes[0].boundary == "reflecting":
            scale = np.where(out, (2.0 * radius - r) / np.where(out, r, 1.0), 1.0)
            positions *= scale[:, None]
        else:
            absorbed |= out
    else:
        for ax, axis in enumerate(grid.axes):
            c = positions[:, ax]
            if axis.periodic:
                positions[:, ax] = axis.start + np.mod(c - axis.start, axis.length)
                continue
            low = alive & (c < axis.start)
            high = alive & (c > axis.stop)
            if axis.boundary == "reflecting":
                c = np.where(low, 2.0 * axis.start - c, c)
                c = np.where(high, 2.0 * axis.stop - c, c)
                positions[:, ax] = np.clip(c, axis.start, axis.stop)
            else:
                absorbed |= low | high
    positions[absorbed] = np.nan
    return absorbed
