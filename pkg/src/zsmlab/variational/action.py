"""Ensemble-averaged time-symmetric mean action.

    J = integral dt integral rho { 1/4 m (b^2 + b*^2) - V }        ("yasue")
      = integral dt integral rho { 1/2 m v^2 + 1/2 m u^2 - V }

The "bbstar" decomposition swaps the kinetic term for 1/2 m b.b* =
1/2 m (v^2 - u^2). A vector potential adds (e/c) A.v; the rest-energy
convention adds m c^2 (t_f - t_i).
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import InvalidParameterError
from zsmlab.core.grid import Grid
from zsmlab.core.potentials import Potentials
from zsmlab.diffusion.ensemble import TrajectoryBundle
from zsmlab.diffusion.interpolation import cartesian_components, interpolate
from zsmlab.fields.kinematics import KinematicFields

LOG = logging.getLogger("zsmlab.variational")

Decomposition = Literal["yasue", "bbstar"]
PART_NAMES = ("current_kinetic", "osmotic_kinetic", "potential", "magnetic", "rest_energy")


@dataclass(frozen=True, eq=False)
class StateSlice:
    """rho, v and u at one instant; vectors are (d, *grid.shape)."""

    t: float
    rho: np.ndarray
    current: np.ndarray
    osmotic: np.ndarray


@dataclass(frozen=True)
class ActionEstimate:
    value: float
    stderr: float
    parts: dict[str, float] = field(default_factory=dict)
    decomposition: Decomposition = "yasue"
    samples: int = 0

    def to_json(self) -> dict[str, object]:
        return {
            "action": self.value,
            "stderr": self.stderr,
            "parts": dict(self.parts),
            "decomposition": self.decomposition,
            "samples": self.samples,
        }


def _check_decomposition(decomposition: str) -> None:
    if decomposition not in ("yasue", "bbstar"):
        raise InvalidParameterError("decomposition", f"expected 'yasue' or 'bbstar', got {decomposition!r}")


def _time_weights(times: np.ndarray) -> np.ndarray:
    """Trapezoid weights on a strictly increasing time grid."""
    if times.size < 2:
        raise InvalidParameterError("times", "need at least two time slices")
    if np.any(np.diff(times) <= 0):
        raise InvalidParameterError("times", "time slices must increase")
    dt = np.diff(times)
    w = np.zeros(times.size)
    w[:-1] += 0.5 * dt
    w[1:] += 0.5 * dt
    return w


def _estimate(parts: dict[str, float], stderr: float, decomposition: Decomposition, samples: int) -> ActionEstimate:
    value = math.fsum(parts.values())
    estimate = ActionEstimate(value, stderr, parts, decomposition, samples)
    LOG.info("action=%s", json.dumps(estimate.to_json(), ensure_ascii=True))
    return estimate


def field_action(
    history: Sequence[StateSlice],
    grid: Grid,
    pot: Potentials,
    k: PhysicalConstants,
    *,
    rest_energy: bool = False,
    decomposition: Decomposition = "yasue",
) -> ActionEstimate:
    """Space quadrature with the grid weights, trapezoid in time."""
    _check_decomposition(decomposition)
    grid.require_same(pot.grid)
    times = np.array([s.t for s in history], dtype=float)
    tw = _time_weights(times)
    sign = 1.0 if decomposition == "yasue" else -1.0
    coupling = k.charge / k.light_speed
    totals = dict.fromkeys(PART_NAMES, 0.0)
    for weight, s in zip(tw, history):
        mass = grid.weights * s.rho
        totals["current_kinetic"] += weight * float(np.sum(mass * 0.5 * k.mass * np.sum(s.current**2, axis=0)))
        totals["osmotic_kinetic"] += sign * weight * float(np.sum(mass * 0.5 * k.mass * np.sum(s.osmotic**2, axis=0)))
        totals["potential"] -= weight * float(np.sum(mass * pot.total(s.t)))
        if pot.vector is not None:
            a_dot_v = np.sum(pot.vector.values * s.current, axis=0)
            totals["magnetic"] += weight * coupling * float(np.sum(mass * a_dot_v))
    if rest_energy:
        totals["rest_energy"] = k.rest_energy * float(times[-1] - times[0])
    return _estimate(totals, 0.0, decomposition, 0)


DriftSource = KinematicFields | Callable[[float], KinematicFields]


def _bundle_times(bundle: TrajectoryBundle) -> tuple[np.ndarray, list[np.ndarray]]:
    times = np.asarray(bundle.times, dtype=float)
    order = np.argsort(times)
    return times[order], [bundle.frames[i] for i in order]


def _particle_integrands(
    positions: np.ndarray,
    kin: KinematicFields,
    pot: Potentials,
    t: float,
    k: PhysicalConstants,
) -> dict[str, np.ndarray]:
    grid = kin.current.grid
    v = interpolate(grid, cartesian_components(kin.current), positions, check=False)
    u = interpolate(grid, cartesian_components(kin.osmotic), positions, check=False)
    out = {
        "current_kinetic": 0.5 * k.mass * np.sum(v**2, axis=1),
        "osmotic_kinetic": 0.5 * k.mass * np.sum(u**2, axis=1),
        "potential": -interpolate(grid, pot.total(t), positions, check=False),
        "magnetic": np.zeros(positions.shape[0]),
    }
    if pot.vector is not None:
        a = interpolate(grid, cartesian_components(pot.vector), positions, check=False)
        out["magnetic"] = (k.charge / k.light_speed) * np.sum(a * v, axis=1)
    return out


def monte_carlo_action(
    paths: TrajectoryBundle | tuple[TrajectoryBundle, TrajectoryBundle],
    drift: DriftSource,
    pot: Potentials,
    k: PhysicalConstants,
    *,
    rest_energy: bool = False,
    decomposition: Decomposition = "yasue",
) -> ActionEstimate:
    """Average of the per-path action over stored frames.

    A (forward, backward) pair pools both ensembles; their frame times must
    coincide. Paths that are absorbed before the last frame are dropped.
    """
    _check_decomposition(decomposition)
    bundles = paths if isinstance(paths, tuple) else (paths,)
    times, _ = _bundle_times(bundles[0])
    for other in bundles[1:]:
        other_times, _ = _bundle_times(other)
        if other_times.shape != times.shape or not np.allclose(other_times, times, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(times).max()))):
            raise InvalidParameterError("paths", "forward and backward time grids differ")
    tw = _time_weights(times)
    sign = 1.0 if decomposition == "yasue" else -1.0

    per_path: list[dict[str, np.ndarray]] = []
    for bundle in bundles:
        _, frames = _bundle_times(bundle)
        size = frames[0].shape[0]
        acc = {name: np.zeros(size) for name in PART_NAMES[:4]}
        alive = np.ones(size, dtype=bool)
        for weight, t, q in zip(tw, times, frames):
            alive &= np.all(np.isfinite(q), axis=1)
            kin = drift(float(t)) if callable(drift) else drift
            vals = _particle_integrands(np.where(np.isfinite(q), q, 0.0), kin, pot, float(t), k)
            for name, values in vals.items():
                acc[name] += weight * values
        acc["osmotic_kinetic"] *= sign
        per_path.append({name: values[alive] for name, values in acc.items()})

    pooled = {name: np.concatenate([p[name] for p in per_path]) for name in PART_NAMES[:4]}
    n = pooled["potential"].size
    if n == 0:
        raise InvalidParameterError("paths", "every path was absorbed")
    total = sum(pooled.values())
    stderr = float(np.std(total, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    parts = {name: float(np.mean(values)) for name, values in pooled.items()}
    parts["rest_energy"] = k.rest_energy * float(times[-1] - times[0]) if rest_energy else 0.0
    return _estimate(parts, stderr, decomposition, n)


def discrete_action(
    source: Sequence[StateSlice] | TrajectoryBundle | tuple[TrajectoryBundle, TrajectoryBundle],
    pot: Potentials,
    k: PhysicalConstants,
    *,
    drift: DriftSource | None = None,
    rest_energy: bool = False,
    decomposition: Decomposition = "yasue",
) -> ActionEstimate:
    """Field quadrature for a sequence of slices, Monte Carlo for trajectory bundles."""
    if isinstance(source, TrajectoryBundle) or (
        isinstance(source, tuple) and source and isinstance(source[0], TrajectoryBundle)
    ):
        if drift is None:
            raise InvalidParameterError("drift", "Monte Carlo action needs the drift fields")
        return monte_carlo_action(source, drift, pot, k, rest_energy=rest_energy, decomposition=decomposition)
    return field_action(list(source), pot.grid, pot, k, rest_energy=rest_energy, decomposition=decomposition)
