"""Mean acceleration of the diffusion and the force it must balance.

    a = dv/dt + (v.grad)v - (u.grad)u - nu lap u
    F/m = -grad V_total / m + (e/mc) v x B

u is a gradient, so (u.grad)u = grad(u^2/2) and lap u = grad(div u); the
convective term uses (v.grad)v = grad(v^2/2) - v x curl v.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import InvalidParameterError, MissingFramesError
from zsmlab.core.field import ScalarField, VectorField, merge_masks
from zsmlab.core.potentials import Potentials
from zsmlab.core.stencils import curl, divergence, gradient
from zsmlab.fields.kinematics import kinematic_fields
from zsmlab.fields.phase import DEFAULT_NODE_FLOOR, PhaseField

LOG = logging.getLogger("zsmlab.diffusion")

VelocityFrames = Sequence[tuple[float, VectorField]]


@dataclass(frozen=True, eq=False)
class AccelerationReport:
    acceleration: VectorField
    force: VectorField
    residual: VectorField
    residual_l2: float
    residual_linf: float
    evaluated_nodes: int

    def to_json(self) -> dict[str, float | int]:
        return {
            "residual_l2": self.residual_l2,
            "residual_linf": self.residual_linf,
            "evaluated_nodes": self.evaluated_nodes,
        }


def _cross_z(grid_ndim: int, vec: np.ndarray, bz: np.ndarray) -> np.ndarray:
    """vec x (bz z_hat) for in-plane vec."""
    if grid_ndim != 2:
        return np.zeros_like(vec)
    return np.stack([vec[1] * bz, -vec[0] * bz])


def velocity_time_derivative(frames: VelocityFrames, t: float) -> VectorField:
    """dv/dt at the stored frame nearest t (second order inside the series)."""
    if len(frames) < 2:
        raise MissingFramesError("need at least two velocity frames for dv/dt")
    times = np.array([ft for ft, _ in frames], dtype=float)
    if np.any(np.diff(times) <= 0):
        raise InvalidParameterError("frames", "frame times must increase")
    stack = np.stack([f.values for _, f in frames])
    deriv = np.gradient(stack, times, axis=0)
    i = int(np.argmin(np.abs(times - t)))
    grid = frames[i][1].grid
    return VectorField(grid, deriv[i], merge_masks(*(f.mask for _, f in frames)))


def interior_nodes(mask: np.ndarray | None, shape: tuple[int, ...], margin: int = 2) -> np.ndarray:
    """Valid nodes at least `margin` stencil steps from any masked node."""
    if mask is None:
        return np.ones(shape, dtype=bool)
    return ndimage.binary_erosion(~mask, iterations=margin, border_value=1)


def mean_acceleration(
    rho: ScalarField,
    phase: PhaseField,
    pot: Potentials,
    k: PhysicalConstants,
    *,
    t: float = 0.0,
    frames: VelocityFrames | None = None,
    time_dependent: bool = False,
    node_floor: float = DEFAULT_NODE_FLOOR,
    margin: int = 2,
) -> AccelerationReport:
    """Evaluate both sides of the mean acceleration equation and their difference.

    A static (rho, S) has dv/dt = 0 unless frames of v are supplied. Marking
    the state time dependent, or passing a time-dependent potential, without
    frames is an error.
    """
    grid = rho.grid
    grid.require_same(phase.grid)
    grid.require_same(pot.grid)
    if frames is None and (time_dependent or pot.is_time_dependent):
        raise MissingFramesError("time-dependent state: supply velocity frames to estimate dv/dt")

    kin = kinematic_fields(rho, phase, k, pot.vector, node_floor)
    v = kin.current.values
    u = kin.osmotic.values
    nu = k.diffusion

    convective = gradient(grid, 0.5 * np.sum(v**2, axis=0))
    if grid.ndim == 2:
        convective = convective - _cross_z(2, v, curl(grid, v))
    osmotic = gradient(grid, 0.5 * np.sum(u**2, axis=0))
    diffusive = gradient(grid, divergence(grid, u))
    accel = convective - osmotic - nu * diffusive
    mask = kin.mask
    if frames is not None:
        dv = velocity_time_derivative(frames, t)
        grid.require_same(dv.grid)
        accel = accel + dv.values
        mask = merge_masks(mask, dv.mask)

    force = -gradient(grid, pot.total(t)) / k.mass
    bz = pot.magnetic()
    if bz is not None:
        force = force + (k.charge / (k.mass * k.light_speed)) * _cross_z(2, v, bz)

    residual = accel - force
    keep = interior_nodes(mask, grid.shape, margin)
    weight = grid.weights * np.maximum(rho.values, 0.0) * keep
    norm_sq = np.sum(residual**2, axis=0)
    total = float(weight.sum())
    l2 = float(np.sqrt(np.sum(weight * norm_sq) / total)) if total > 0 else 0.0
    linf = float(np.sqrt(norm_sq[keep].max())) if keep.any() else 0.0

    report = AccelerationReport(
        acceleration=VectorField(grid, accel, mask),
        force=VectorField(grid, force, mask),
        residual=VectorField(grid, residual, mask),
        residual_l2=l2,
        residual_linf=linf,
        evaluated_nodes=int(keep.sum()),
    )
    LOG.info("mean_acceleration=%s", json.dumps(report.to_json(), ensure_ascii=True))
    return report
