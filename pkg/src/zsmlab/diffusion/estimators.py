"""Estimators over particle ensembles and trajectory bundles."""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass

import numpy as np
from scipy import ndimage

from zsmlab.core.errors import InvalidParameterError
from zsmlab.core.field import ScalarField, VectorField, integrate
from zsmlab.core.grid import Grid
from zsmlab.diffusion.ensemble import EnsembleState, TrajectoryBundle
from zsmlab.diffusion.interpolation import interpolate, scalar_at, to_grid_coords
from zsmlab.fields.kinematics import interior_node_region

LOG = logging.getLogger("zsmlab.diffusion")

MIN_PARTICLES = 100
MIN_BIN_COUNT = 30


def nearest_node(grid: Grid, positions: np.ndarray) -> np.ndarray:
    """Flat index of the nearest grid node for each (finite) position."""
    coords = to_grid_coords(grid, positions)
    index = []
    for ax, axis in enumerate(grid.axes):
        offset = 0.5 if axis.cell_centred else 0.0
        s = (coords[:, ax] - axis.start) / axis.spacing - offset
        i = np.rint(s).astype(np.int64)
        i = np.mod(i, axis.nodes) if axis.periodic else np.clip(i, 0, axis.nodes - 1)
        index.append(i)
    return np.ravel_multi_index(tuple(index), grid.shape)


def silverman_bandwidth(positions: np.ndarray) -> float:
    n, dim = positions.shape
    spread = []
    for col in positions.T:
        q75, q25 = np.percentile(col, [75, 25])
        spread.append(min(float(np.std(col)), float(q75 - q25) / 1.34))
    return 0.9 * min(spread) * n ** (-1.0 / (dim + 4))


def _filter_mode(grid: Grid, ax: int) -> str:
    axis = grid.axes[ax]
    if axis.periodic:
        return "wrap"
    if axis.boundary == "reflecting" or (grid.is_polar and ax == 0):
        return "reflect"
    return "constant"


def empirical_density(ens: EnsembleState, grid: Grid | None = None, bandwidth: float | None = None) -> ScalarField:
    """Gaussian kernel density estimate on a grid, normalized.

    Particles are binned to their nearest node and the histogram is smoothed
    with a Gaussian of width `bandwidth` (Silverman's rule when omitted),
    wrapping on periodic axes.
    """
    grid = grid or ens.grid
    live = ens.live_positions()
    n = live.shape[0]
    if n < MIN_PARTICLES:
        raise InvalidParameterError("N", f"need at least {MIN_PARTICLES} particles, got {n}")
    if bandwidth is None:
        bandwidth = silverman_bandwidth(live)
        periodic = [a.length / 8.0 for a in grid.axes if a.periodic and not grid.is_polar]
        if periodic:
            bandwidth = min(bandwidth, *periodic)
    if not bandwidth > 0:
        raise InvalidParameterError("bandwidth", f"must be positive, got {bandwidth}")

    counts = np.bincount(nearest_node(grid, live), minlength=grid.size).reshape(grid.shape)
    rho = counts / (n * grid.weights)

    if grid.is_polar:
        dr, dphi = grid.spacing
        rho = ndimage.gaussian_filter1d(rho, bandwidth / dr, axis=0, mode="reflect")
        cap = grid.shape[1] / 2.0
        for i, r in enumerate(grid.coords[0]):
            sigma = min(bandwidth / (r * dphi), cap)
            rho[i] = ndimage.gaussian_filter1d(rho[i], sigma, mode="wrap")
    else:
        for ax, axis in enumerate(grid.axes):
            rho = ndimage.gaussian_filter1d(rho, bandwidth / axis.spacing, axis=ax, mode=_filter_mode(grid, ax))

    total = integrate(grid, rho)
    return ScalarField(grid, rho / total)


def l1_distance(a: ScalarField, b: ScalarField) -> float:
    a.grid.require_same(b.grid)
    return integrate(a.grid, np.abs(a.values - b.values))


@dataclass(frozen=True, eq=False)
class MeanDerivativeEstimate:
    """Bin-averaged mean derivative with per-bin standard errors and counts."""

    field: VectorField | ScalarField
    stderr: np.ndarray
    counts: np.ndarray
    direction: str
    masked_bins: int

    @property
    def mask(self) -> np.ndarray | None:
        return self.field.mask


def _displacement(grid: Grid, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    delta = b - a
    if grid.is_polar:
        return delta
    for ax, axis in enumerate(grid.axes):
        if axis.periodic:
            delta[:, ax] -= axis.length * np.rint(delta[:, ax] / axis.length)
    return delta


def _to_grid_frame(grid: Grid, cartesian: np.ndarray) -> np.ndarray:
    """Rotate Cartesian node vectors (ndim, *shape) into (radial, azimuthal) on the disk."""
    if not grid.is_polar:
        return cartesian
    phi = grid.mesh[1]
    vx, vy = cartesian
    return np.stack([vx * np.cos(phi) + vy * np.sin(phi), -vx * np.sin(phi) + vy * np.cos(phi)])


def mean_derivative(
    paths: TrajectoryBundle,
    grid: Grid,
    direction: str = "forward",
    f: ScalarField | None = None,
    min_count: int = MIN_BIN_COUNT,
) -> MeanDerivativeEstimate:
    """Monte Carlo D (forward) or D* (backward) of q, or of a static field f.

    D conditions on the earlier position of each frame pair and D* on the
    later one, whatever direction the paths were simulated in.
    """
    if len(paths.frames) < 2:
        raise InvalidParameterError("paths", "need at least two frames")
    if direction not in ("forward", "backward"):
        raise InvalidParameterError("direction", f"unknown direction {direction!r}")
    order = np.argsort(paths.times)
    times = np.asarray(paths.times)[order]
    frames = [paths.frames[i] for i in order]
    ncomp = grid.ndim if f is None else 1

    counts = np.zeros(grid.size)
    sums = np.zeros((ncomp, grid.size))
    squares = np.zeros((ncomp, grid.size))
    for k in range(len(frames) - 1):
        tau = float(times[k + 1] - times[k])
        early, late = frames[k], frames[k + 1]
        ok = np.all(np.isfinite(early), axis=1) & np.all(np.isfinite(late), axis=1)
        early, late = early[ok], late[ok]
        if f is None:
            values = _displacement(grid, early, late) / tau
        else:
            values = ((scalar_at(f, late) - scalar_at(f, early)) / tau)[:, None]
        anchor = early if direction == "forward" else late
        bins = nearest_node(grid, anchor)
        counts += np.bincount(bins, minlength=grid.size)
        for c in range(ncomp):
            sums[c] += np.bincount(bins, weights=values[:, c], minlength=grid.size)
            squares[c] += np.bincount(bins, weights=values[:, c] ** 2, minlength=grid.size)

    sparse = counts < min_count
    safe = np.where(sparse, 1.0, counts)
    mean = sums / safe
    var = np.maximum(squares / safe - mean**2, 0.0)
    stderr = np.sqrt(var / safe)
    mean[:, sparse] = 0.0
    stderr[:, sparse] = np.inf

    shape = grid.shape
    counts = counts.reshape(shape)
    mask = sparse.reshape(shape)
    if f is None:
        mean = _to_grid_frame(grid, mean.reshape(grid.ndim, *shape))
        stderr = stderr.reshape(grid.ndim, *shape)
        if grid.is_polar:
            stderr = np.broadcast_to(np.max(stderr, axis=0), stderr.shape).copy()
        field: VectorField | ScalarField = VectorField(grid, mean, mask)
    else:
        field = ScalarField(grid, mean[0].reshape(shape), mask)
        stderr = stderr[0].reshape(shape)
    masked = int(mask.sum())
    if masked:
        LOG.info("mean_derivative_masked=%s", json.dumps({"bins": masked, "min_count": min_count}))
    return MeanDerivativeEstimate(field, stderr, counts, direction, masked)


# node avoidance ---------------------------------------------------------------


def density_at(rho: ScalarField, positions: np.ndarray) -> np.ndarray:
    """Interpolated density at positions; inside the innermost disk ring a
    quadratic in r through the first three radial nodes replaces the clamp."""
    values = scalar_at(rho, positions)
    grid = rho.grid
    if grid.is_polar:
        r = np.hypot(positions[:, 0], positions[:, 1])
        r_nodes = grid.coords[0][:3]
        inner = r < r_nodes[0]
        if inner.any():
            phi = np.mod(np.arctan2(positions[inner, 1], positions[inner, 0]), 2.0 * math.pi)
            rows = np.stack(
                [interpolate(grid, rho.values, np.column_stack([rk * np.cos(phi), rk * np.sin(phi)]), check=False) for rk in r_nodes]
            )
            vander = np.vander(r_nodes, 3, increasing=True)
            coef = np.linalg.solve(vander, rows)
            model = coef[0] + coef[1] * r[inner] + coef[2] * r[inner] ** 2
            values[inner] = np.maximum(model, 0.0)
    return np.maximum(values, 0.0)


@dataclass(frozen=True)
class NodeAuditReport:
    min_density: float
    min_relative_density: float
    min_node_relative_density: float
    entries: int
    samples: int
    node_floor: float
    node_cells: int

    def to_json(self) -> dict[str, float | int]:
        return asdict(self)


DensitySource = ScalarField | Callable[[float], ScalarField]


class NodeAudit:
    """Step observer counting particle entries into the node region of rho(t).

    An entry is a live particle whose local density falls below
    node_floor * max(rho) inside an interior low-density component (or inside
    the innermost ring of a disk), having been outside it before.
    """

    def __init__(self, rho: DensitySource, node_floor: float = 1e-4):
        if not node_floor > 0:
            raise InvalidParameterError("node_floor", "must be positive")
        self.rho = rho
        self.node_floor = node_floor
        self.entries = 0
        self.samples = 0
        self.min_density = math.inf
        self.min_relative = math.inf
        self.min_node_relative = math.inf
        self.node_cells = 0
        self._inside: np.ndarray | None = None
        self._cache: tuple[int, np.ndarray, float] | None = None

    def _density(self, t: float) -> ScalarField:
        return self.rho(t) if callable(self.rho) else self.rho

    def _region(self, rho: ScalarField) -> tuple[np.ndarray, float]:
        if self._cache is None or self._cache[0] != id(rho):
            region = interior_node_region(rho, self.node_floor)
            self._cache = (id(rho), region.ravel(), float(rho.values.max()))
            self.node_cells = max(self.node_cells, int(region.sum()))
        return self._cache[1], self._cache[2]

    def observe(self, t: float, positions: np.ndarray) -> None:
        rho = self._density(t)
        region, peak = self._region(rho)
        live = np.all(np.isfinite(positions), axis=1)
        if self._inside is None:
            self._inside = np.zeros(positions.shape[0], dtype=bool)
        q = positions[live]
        if q.shape[0] == 0:
            return
        dens = density_at(rho, q)
        rel = dens / peak
        in_region = region[nearest_node(rho.grid, q)]
        if rho.grid.is_polar:
            in_region |= np.hypot(q[:, 0], q[:, 1]) < rho.grid.coords[0][0]
        inside = np.zeros(positions.shape[0], dtype=bool)
        inside[live] = in_region & (rel < self.node_floor)
        self.entries += int(np.count_nonzero(inside & ~self._inside))
        self._inside = inside
        self.samples += int(q.shape[0])
        self.min_density = min(self.min_density, float(dens.min()))
        self.min_relative = min(self.min_relative, float(rel.min()))
        if in_region.any():
            self.min_node_relative = min(self.min_node_relative, float(rel[in_region].min()))

    def __call__(self, step: int, t: float, state: EnsembleState) -> None:
        self.observe(t, state.positions)

    def report(self) -> NodeAuditReport:
        return NodeAuditReport(
            min_density=self.min_density if math.isfinite(self.min_density) else 0.0,
            min_relative_density=self.min_relative if math.isfinite(self.min_relative) else 1.0,
            min_node_relative_density=self.min_node_relative if math.isfinite(self.min_node_relative) else 1.0,
            entries=self.entries,
            samples=self.samples,
            node_floor=self.node_floor,
            node_cells=self.node_cells,
        )


def node_avoidance_audit(
    paths: TrajectoryBundle,
    rho_frames: ScalarField | Sequence[ScalarField],
    node_floor: float = 1e-4,
) -> NodeAuditReport:
    """Audit stored frames against rho (one static field or one per frame).

    min_node_relative_density only covers positions in or next to the node
    region (1.0 when none was visited).
    """
    if isinstance(rho_frames, ScalarField):
        audit = NodeAudit(rho_frames, node_floor)
        for t, frame in zip(paths.times, paths.frames):
            audit.observe(t, frame)
    else:
        if len(rho_frames) != len(paths.frames):
            raise InvalidParameterError("rho_frames", "need one density per stored frame")
        audit = NodeAudit(rho_frames[0], node_floor)
        for t, frame, rho in zip(paths.times, paths.frames, rho_frames):
            audit.rho = rho
            audit.observe(t, frame)
    report = audit.report()
    LOG.info("node_audit=%s", json.dumps(report.to_json(), ensure_ascii=True))
    return report
