"""Extraneous central-potential solutions of the Madelung equations.

For a radial V and a >= 0, let (rho_a, v_a) be the lowest winding-one state
of V_a = V + a/r^2, with v_a = hbar/(m r) azimuthal. Scaling the velocity to
v'_a = v_a sqrt(2ma/hbar^2 + 1) absorbs the a/r^2 term, so (rho_a, v'_a)
solves the continuity and Hamilton-Jacobi equations for the original V with
the same energy. Its phase S'_a = hbar w phi changes by w*h around the
origin, which is a multiple of h only when w is an integer.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import InvalidParameterError
from zsmlab.core.field import ScalarField, VectorField
from zsmlab.core.grid import Grid, ring_grid
from zsmlab.core.potentials import Potentials
from zsmlab.fields.kinematics import current_velocity, node_mask
from zsmlab.fields.phase import DEFAULT_NODE_FLOOR, PhaseField
from zsmlab.hjm.residuals import ResidualReport, hjm_residuals
from zsmlab.schrodinger.eigen import radial_ground_state, radial_values

LOG = logging.getLogger("zsmlab.hjm")

INTEGER_WINDOW = 1e-9


def winding_factor(a: float, k: PhysicalConstants) -> float:
    """sqrt(2 m a / hbar^2 + 1)."""
    return math.sqrt(2.0 * k.mass * a / k.hbar**2 + 1.0)


def classify(value: float, window: float = INTEGER_WINDOW) -> str:
    return "integer" if abs(value - round(value)) <= window else "non-integer"


@dataclass(frozen=True, eq=False)
class WallstromSolution:
    a: float
    winding: float
    classification: str
    energy: float
    rho: ScalarField
    phase: PhaseField
    velocity: VectorField
    base_velocity: VectorField
    base_phase: PhaseField
    residuals: ResidualReport
    base_residuals: ResidualReport
    radial_residual: float

    @property
    def is_integer(self) -> bool:
        return self.classification == "integer"

    def to_json(self) -> dict[str, object]:
        return {
            "a": self.a,
            "winding": self.winding,
            "classification": self.classification,
            "energy": self.energy,
            "residuals": self.residuals.to_json(),
            "base_residuals": self.base_residuals.to_json(),
            "radial_residual": self.radial_residual,
        }


def azimuthal_phase(grid: Grid, winding: float, hbar: float, mask: np.ndarray | None = None) -> PhaseField:
    """S = winding * hbar * phi on a disk, with its seam jump of winding * h."""
    if not grid.is_polar:
        raise InvalidParameterError("grid", "azimuthal phase needs a disk-polar grid")
    phi = grid.mesh[1]
    return PhaseField.from_unwrapped(
        grid,
        winding * hbar * phi,
        hbar,
        seam_jumps=(0.0, winding * 2.0 * math.pi * hbar),
        mask=mask,
    )


def centrifugal(grid: Grid, a: float) -> np.ndarray:
    return a / grid.mesh[0] ** 2


def wallstrom_extraneous_solution(
    a: float,
    potential: Potentials,
    k: PhysicalConstants,
    tol: float = 1e-6,
    *,
    node_floor: float = DEFAULT_NODE_FLOOR,
    solver_tol: float = 1e-10,
) -> WallstromSolution:
    """Build (rho_a, v'_a) and check it against both V_a (with v_a) and V (with v'_a)."""
    if a < 0:
        raise InvalidParameterError("a", "must be non-negative")
    grid = potential.grid
    if not grid.is_polar:
        raise InvalidParameterError("grid", "extraneous solutions live on a disk-polar grid")
    if potential.scalar is None:
        raise InvalidParameterError("V", "needs a radial scalar potential")

    w = winding_factor(a, k)
    base = radial_values(potential.scalar)
    # winding w in V is the same radial problem as winding 1 in V_a
    sol = radial_ground_state(grid, base, w, k, tol=solver_tol)
    profile = sol.profile[:, None] * np.ones(grid.shape[1])
    rho = ScalarField(grid, profile**2 / (2.0 * math.pi))
    mask = node_mask(rho, node_floor)

    phase = azimuthal_phase(grid, w, k.hbar, mask)
    base_phase = azimuthal_phase(grid, 1.0, k.hbar, mask)
    velocity = current_velocity(phase, k)
    base_velocity = current_velocity(base_phase, k)

    v_a = Potentials(grid, scalar=ScalarField(grid, potential.scalar.values + centrifugal(grid, a)))
    tolerances = dict(hj_tol=tol, node_floor=node_floor)
    residuals = hjm_residuals(rho, phase, potential, k, energy=sol.energy, **tolerances)
    base_residuals = hjm_residuals(rho, base_phase, v_a, k, energy=sol.energy, **tolerances)

    solution = WallstromSolution(
        a=a,
        winding=w,
        classification=classify(w),
        energy=sol.energy,
        rho=rho,
        phase=phase,
        velocity=velocity,
        base_velocity=base_velocity,
        base_phase=base_phase,
        residuals=residuals,
        base_residuals=base_residuals,
        radial_residual=sol.residual,
    )
    LOG.info(
        "wallstrom_solution=%s",
        json.dumps(
            {"a": a, "winding": w, "classification": solution.classification, "hj_linf": residuals.hj_linf},
            ensure_ascii=True,
        ),
    )
    return solution


@dataclass(frozen=True)
class SuperpositionReport:
    k1: float
    k2: float
    mismatch: float
    single_valued: bool
    expected_single_valued: bool

    def to_json(self) -> dict[str, object]:
        return {
            "k1": self.k1,
            "k2": self.k2,
            "mismatch": self.mismatch,
            "single_valued": self.single_valued,
            "expected_single_valued": self.expected_single_valued,
        }


def ring_superposition_check(
    k1: float,
    k2: float,
    amplitudes: tuple[complex, complex] = (1.0, 1.0),
    *,
    nodes: int = 512,
    radius: float = 1.0,
    window: float = INTEGER_WINDOW,
    mismatch_tol: float = 1e-12,
) -> SuperpositionReport:
    """Compare |psi_s|^2 at theta and at its continuation theta + 2pi.

    psi_s = N (c1 exp(i k1 theta) + c2 exp(i k2 theta)); the density is
    periodic iff k1 - k2 is an integer.
    """
    grid = ring_grid(nodes, radius)
    theta = grid.angle
    c1, c2 = amplitudes
    if c1 == 0 and c2 == 0:
        raise InvalidParameterError("amplitudes", "at least one amplitude must be non-zero")

    def density(angle: np.ndarray) -> np.ndarray:
        return np.abs(c1 * np.exp(1j * k1 * angle) + c2 * np.exp(1j * k2 * angle)) ** 2

    base = density(theta)
    norm = float(np.sum(base * grid.weights))
    if not norm > 0:
        raise InvalidParameterError("amplitudes", "superposition vanishes identically")
    mismatch = float(np.max(np.abs(density(theta + 2.0 * math.pi) - base)) / norm)
    report = SuperpositionReport(
        k1=k1,
        k2=k2,
        mismatch=mismatch,
        single_valued=mismatch <= mismatch_tol,
        expected_single_valued=classify(k1 - k2, window) == "integer",
    )
    LOG.info("ring_superposition=%s", json.dumps(report.to_json(), ensure_ascii=True))
    return report
