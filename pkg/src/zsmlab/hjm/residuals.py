"""Residuals of the coupled continuity and quantum Hamilton-Jacobi equations.

    continuity:  d rho/dt + div(rho v) = 0
    HJ:          dS/dt [+ mc^2] + |grad S - (e/c) A|^2 / 2m + V_total + Q = 0

E = -dS/dt. With rest_energy=True the energy carries mc^2 and the HJ
residual adds it back, so either convention gives the same residual.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import InvalidParameterError, MissingFramesError
from zsmlab.core.field import ScalarField, merge_masks
from zsmlab.core.potentials import Potentials
from zsmlab.core.stencils import divergence
from zsmlab.diffusion.acceleration import interior_nodes
from zsmlab.fields.kinematics import current_velocity, node_mask, quantum_kinetic
from zsmlab.fields.phase import DEFAULT_NODE_FLOOR, PhaseField, wrap_phase

LOG = logging.getLogger("zsmlab.hjm")

DEFAULT_CONTINUITY_TOL = 1e-8
DEFAULT_HJ_TOL = 1e-6
# HJ norms skip the far tails where Q is a ratio of two tiny numbers
DEFAULT_EVALUATION_FLOOR = 1e-6

StateFrames = Sequence[tuple[float, ScalarField, PhaseField]]


@dataclass(frozen=True, eq=False)
class ResidualReport:
    continuity: ScalarField
    hamilton_jacobi: ScalarField
    continuity_l2: float
    continuity_linf: float
    hj_l2: float
    hj_linf: float
    energy: float
    continuity_tol: float
    hj_tol: float
    rest_energy: bool
    evaluated_nodes: int
    windings: tuple[int, ...] = ()

    @property
    def continuity_pass(self) -> bool:
        return self.continuity_l2 <= self.continuity_tol

    @property
    def hj_pass(self) -> bool:
        return self.hj_linf <= self.hj_tol

    @property
    def passed(self) -> bool:
        return self.continuity_pass and self.hj_pass

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict[str, object]:
        return {
            "continuity_l2": self.continuity_l2,
            "continuity_linf": self.continuity_linf,
            "hj_l2": self.hj_l2,
            "hj_linf": self.hj_linf,
            "energy": self.energy,
            "rest_energy": self.rest_energy,
            "tolerances": {"continuity": self.continuity_tol, "hj": self.hj_tol},
            "windings": list(self.windings),
            "verdict": self.verdict,
        }


def _time_derivatives(frames: StateFrames, t: float) -> tuple[np.ndarray, np.ndarray]:
    """(d rho/dt, dS/dt) at the frame nearest t; S differences are taken modulo h."""
    if len(frames) < 2:
        raise MissingFramesError("need at least two (t, rho, S) frames")
    times = np.array([ft for ft, _, _ in frames], dtype=float)
    if np.any(np.diff(times) <= 0):
        raise InvalidParameterError("frames", "frame times must increase")
    rho = np.stack([r.values for _, r, _ in frames])
    h = frames[0][2].planck
    steps = [wrap_phase(b.principal - a.principal, h) for (_, _, a), (_, _, b) in zip(frames[:-1], frames[1:])]
    s_series = np.concatenate([np.zeros((1, *rho.shape[1:])), np.cumsum(steps, axis=0)])
    i = int(np.argmin(np.abs(times - t)))
    return np.gradient(rho, times, axis=0)[i], np.gradient(s_series, times, axis=0)[i]


def stationary_phase(phase: PhaseField, energy: float, t: float) -> PhaseField:
    """S(t) = S(0) - E t for a stationary state."""
    return phase.shifted(-energy * t)


def stationary_frames(
    rho: ScalarField, phase: PhaseField, energy: float, times: Sequence[float]
) -> list[tuple[float, ScalarField, PhaseField]]:
    """(t, rho, S(t)) frames of a stationary state; |E| dt must stay below h/2."""
    return [(float(t), rho, stationary_phase(phase, energy, float(t))) for t in times]


def local_energy(
    rho: ScalarField,
    phase: PhaseField,
    pot: Potentials,
    k: PhysicalConstants,
    *,
    t: float = 0.0,
    node_floor: float = DEFAULT_NODE_FLOOR,
) -> ScalarField:
    """|grad S - eA/c|^2/2m + V_total + Q without rest energy."""
    v = current_velocity(phase, k, pot.vector)
    q = quantum_kinetic(rho, k, node_floor)
    values = 0.5 * k.mass * np.sum(v.values**2, axis=0) + pot.total(t) + q.values
    return ScalarField(rho.grid, values, merge_masks(v.mask, q.mask))


def hjm_residuals(
    rho: ScalarField,
    phase: PhaseField,
    pot: Potentials,
    k: PhysicalConstants,
    *,
    energy: float | None = None,
    frames: StateFrames | None = None,
    t: float = 0.0,
    time_dependent: bool = False,
    rest_energy: bool = False,
    continuity_tol: float = DEFAULT_CONTINUITY_TOL,
    hj_tol: float = DEFAULT_HJ_TOL,
    node_floor: float = DEFAULT_NODE_FLOOR,
    evaluation_floor: float = DEFAULT_EVALUATION_FLOOR,
    margin: int = 2,
) -> ResidualReport:
    """Evaluate both residual fields and their norms off the node mask.

    Stationary input uses d rho/dt = 0 and dS/dt = -E, with E the
    rho-weighted mean local energy unless given. Time-dependent input needs
    frames of (t, rho, S) bracketing t.
    """
    grid = rho.grid
    grid.require_same(phase.grid)
    grid.require_same(pot.grid)
    if frames is None and (time_dependent or pot.is_time_dependent):
        raise MissingFramesError("time-dependent state: supply (t, rho, S) frames")

    mask = merge_masks(node_mask(rho, node_floor), phase.mask)
    v = current_velocity(phase, k, pot.vector)
    local = local_energy(rho, phase, pot, k, t=t, node_floor=node_floor)
    offset = k.rest_energy if rest_energy else 0.0
    valid = np.ones(grid.shape, dtype=bool) if mask is None else ~mask
    weight = grid.weights * rho.values * valid

    if frames is not None:
        drho_dt, ds_dt = _time_derivatives(frames, t)
        energy = float(-np.sum(weight * ds_dt) / np.sum(weight))
    else:
        drho_dt = np.zeros(grid.shape)
        if energy is None:
            energy = float(np.sum(weight * local.values) / np.sum(weight)) + offset
        ds_dt = np.full(grid.shape, -energy)

    cont = drho_dt + divergence(grid, rho.values * v.values)
    hj = ds_dt + offset + local.values

    keep = interior_nodes(mask, grid.shape, margin)
    keep &= rho.values >= evaluation_floor * float(rho.values.max())
    area = float(np.sum(grid.weights * keep))
    cont_l2 = float(np.sqrt(np.sum(grid.weights * keep * cont**2) / area)) if area > 0 else 0.0
    cont_linf = float(np.abs(cont[keep]).max()) if keep.any() else 0.0
    rho_keep = weight * keep
    mass = float(rho_keep.sum())
    hj_l2 = float(np.sqrt(np.sum(rho_keep * hj**2) / mass)) if mass > 0 else 0.0
    hj_linf = float(np.abs(hj[keep]).max()) if keep.any() else 0.0
    windings: tuple[int, ...] = ()
    if grid.ndim == 2:
        wind = phase.windings()
        windings = tuple(int(w) for w in np.unique(wind[wind != 0]))

    report = ResidualReport(
        continuity=ScalarField(grid, cont, mask),
        hamilton_jacobi=ScalarField(grid, hj, mask),
        continuity_l2=cont_l2,
        continuity_linf=cont_linf,
        hj_l2=hj_l2,
        hj_linf=hj_linf,
        energy=float(energy),
        continuity_tol=continuity_tol,
        hj_tol=hj_tol,
        rest_energy=rest_energy,
        evaluated_nodes=int(keep.sum()),
        windings=windings,
    )
    LOG.info("hjm_residuals=%s", json.dumps(report.to_json(), ensure_ascii=True))
    return report
