"""Velocity fields and the quantum kinetic term derived from (rho, S)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.field import ScalarField, VectorField, merge_masks
from zsmlab.core.stencils import gradient, laplacian
from zsmlab.fields.phase import DEFAULT_NODE_FLOOR, PhaseField


@dataclass(frozen=True, eq=False)
class KinematicFields:
    current: VectorField
    osmotic: VectorField
    forward_drift: VectorField
    backward_drift: VectorField

    @classmethod
    def from_parts(cls, current: VectorField, osmotic: VectorField) -> "KinematicFields":
        return cls(current, osmotic, current + osmotic, current - osmotic)

    @property
    def mask(self) -> np.ndarray | None:
        return self.forward_drift.mask


def node_mask(rho: ScalarField, node_floor: float = DEFAULT_NODE_FLOOR) -> np.ndarray | None:
    peak = float(rho.values.max()) if rho.values.size else 0.0
    mask = rho.values < node_floor * peak
    mask = merge_masks(mask if mask.any() else None, rho.mask)
    return mask


def interior_node_region(rho: ScalarField, node_floor: float) -> np.ndarray:
    """Low-density components that do not reach a non-periodic outer edge."""
    grid = rho.grid
    low = rho.values < node_floor * float(rho.values.max())
    labels, count = ndimage.label(low)
    region = np.zeros(grid.shape, dtype=bool)
    if count == 0:
        return region
    touching: set[int] = set()
    for ax, axis in enumerate(grid.axes):
        if axis.periodic:
            continue
        ends = [-1] if axis.cell_centred else [0, -1]
        for end in ends:
            touching.update(np.unique(np.take(labels, end, axis=ax)).tolist())
    for label in range(1, count + 1):
        if label not in touching:
            region |= labels == label
    return region


def current_velocity(
    phase: PhaseField,
    k: PhysicalConstants,
    vector_potential: VectorField | None = None,
) -> VectorField:
    """v = (grad S - (e/c) A) / m."""
    grad = phase.gradient()
    if vector_potential is not None:
        phase.grid.require_same(vector_potential.grid)
        grad = grad - (k.charge / k.light_speed) * vector_potential.values
    return VectorField(phase.grid, grad / k.mass, phase.mask)


def osmotic_velocity(
    rho: ScalarField,
    k: PhysicalConstants,
    node_floor: float = DEFAULT_NODE_FLOOR,
) -> VectorField:
    """u = (hbar/2m) grad ln rho, masked below node_floor * max(rho)."""
    mask = node_mask(rho, node_floor)
    tiny = np.finfo(float).tiny
    log_rho = np.log(np.maximum(rho.values, tiny))
    if mask is not None:
        # keep masked logs bounded by the floor so neighbours stay finite
        log_rho = np.maximum(log_rho, np.log(max(node_floor * float(rho.values.max()), tiny)))
    return VectorField(rho.grid, k.diffusion * gradient(rho.grid, log_rho), mask)


def quantum_kinetic(
    rho: ScalarField,
    k: PhysicalConstants,
    node_floor: float = DEFAULT_NODE_FLOOR,
) -> ScalarField:
    """-(hbar^2/2m) lap(sqrt rho) / sqrt rho, zero on masked nodes."""
    mask = node_mask(rho, node_floor)
    amp = np.sqrt(np.maximum(rho.values, 0.0))
    lap = laplacian(rho.grid, amp)
    valid = np.ones(rho.grid.shape, dtype=bool) if mask is None else ~mask
    out = np.zeros(rho.grid.shape)
    out[valid] = -(k.hbar**2 / (2.0 * k.mass)) * lap[valid] / amp[valid]
    return ScalarField(rho.grid, out, mask)


def kinematic_fields(
    rho: ScalarField,
    phase: PhaseField,
    k: PhysicalConstants,
    vector_potential: VectorField | None = None,
    node_floor: float = DEFAULT_NODE_FLOOR,
) -> KinematicFields:
    rho.grid.require_same(phase.grid)
    v = current_velocity(phase, k, vector_potential)
    u = osmotic_velocity(rho, k, node_floor)
    mask = merge_masks(v.mask, u.mask)
    v = VectorField(v.grid, v.values, mask)
    u = VectorField(u.grid, u.values, mask)
    return KinematicFields.from_parts(v, u)
