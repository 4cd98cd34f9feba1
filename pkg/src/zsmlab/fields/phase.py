"""Multi-valued phase S with explicit winding bookkeeping.

S is stored three ways: principal values in [0, h), one increment per grid
edge (a discrete 1-form, S[next] - S[here]), and a spanning-tree unwrap per
connected unmasked region. Winding integers live on plaquettes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order, connected_components

from zsmlab.core.errors import GridMismatchError, InvalidParameterError
from zsmlab.core.field import ComplexField, ScalarField
from zsmlab.core.grid import Grid

LOG = logging.getLogger("zsmlab.fields")

DEFAULT_NODE_FLOOR = 1e-9


def wrap_phase(delta: np.ndarray, period: float) -> np.ndarray:
    """Map differences into [-period/2, period/2)."""
    return (delta + 0.5 * period) % period - 0.5 * period


def _forward(values: np.ndarray, grid: Grid, ax: int) -> np.ndarray:
    """values[i+1] - values[i] along an axis (wrapped on periodic axes)."""
    if grid.axes[ax].periodic:
        return np.roll(values, -1, axis=ax) - values
    return np.diff(values, axis=ax)


def _edge_count(grid: Grid, ax: int) -> int:
    axis = grid.axes[ax]
    return axis.nodes if axis.periodic else axis.nodes - 1


@dataclass(frozen=True, eq=False)
class PhaseField:
    grid: Grid
    hbar: float
    principal: np.ndarray
    increments: tuple[np.ndarray, ...]
    unwrapped: np.ndarray
    mask: np.ndarray | None = None
    regions: np.ndarray | None = None
    disconnected: bool = False

    def __post_init__(self) -> None:
        if self.principal.shape != self.grid.shape:
            raise GridMismatchError("phase values do not match grid")
        for ax, inc in enumerate(self.increments):
            expected = list(self.grid.shape)
            expected[ax] = _edge_count(self.grid, ax)
            if inc.shape != tuple(expected):
                raise GridMismatchError(f"increments along axis {ax} have shape {inc.shape}")

    @property
    def planck(self) -> float:
        return 2.0 * math.pi * self.hbar

    @property
    def valid(self) -> np.ndarray:
        return np.ones(self.grid.shape, dtype=bool) if self.mask is None else ~self.mask

    @classmethod
    def from_unwrapped(
        cls,
        grid: Grid,
        values: np.ndarray,
        hbar: float,
        seam_jumps: tuple[float, ...] | None = None,
        mask: np.ndarray | None = None,
    ) -> "PhaseField":
        """Build from a continuous branch of S plus the jump it makes across each periodic seam.

        S = w*hbar*phi on a disk has seam jump w*h on the angle axis; a
        single-valued S has zero jumps.
        """
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise GridMismatchError("phase values do not match grid")
        seam_jumps = seam_jumps or tuple(0.0 for _ in grid.axes)
        incs = []
        for ax, axis in enumerate(grid.axes):
            inc = _forward(values, grid, ax)
            if axis.periodic and seam_jumps[ax]:
                sl = [slice(None)] * grid.ndim
                sl[ax] = -1
                inc[tuple(sl)] += seam_jumps[ax]
            incs.append(inc)
        h = 2.0 * math.pi * hbar
        mask = None if mask is None or not np.any(mask) else np.asarray(mask, dtype=bool)
        regions, disconnected = _label_regions(grid, mask)
        return cls(
            grid=grid,
            hbar=hbar,
            principal=np.mod(values, h),
            increments=tuple(incs),
            unwrapped=np.where(mask, 0.0, values) if mask is not None else values.copy(),
            mask=mask,
            regions=regions,
            disconnected=disconnected,
        )

    def plaquette_circulation(self) -> np.ndarray:
        """Counter-clockwise edge sum around every plaquette (2-D grids)."""
        if self.grid.ndim != 2:
            raise InvalidParameterError("grid", "plaquettes need a 2-D grid")
        inc0, inc1 = self.increments
        p0 = _edge_count(self.grid, 0)
        p1 = _edge_count(self.grid, 1)
        bottom = inc0[:, :p1]
        top = np.roll(inc0, -1, axis=1)[:, :p1] if self.grid.axes[1].periodic else inc0[:, 1:]
        left = inc1[:p0, :]
        right = np.roll(inc1, -1, axis=0)[:p0, :] if self.grid.axes[0].periodic else inc1[1:, :]
        return bottom + right - top - left

    def windings(self) -> np.ndarray:
        """Integer winding per plaquette (zeros for 1-D grids)."""
        if self.grid.ndim != 2:
            return np.zeros(0, dtype=np.int64)
        return np.rint(self.plaquette_circulation() / self.planck).astype(np.int64)

    def plaquette_residual(self) -> np.ndarray:
        circ = self.plaquette_circulation()
        return np.abs(circ - np.rint(circ / self.planck) * self.planck)

    def cycle_circulation(self, ax: int, index: int = 0) -> float:
        """Edge sum along the periodic axis `ax`, at fixed index on the other axis."""
        if not self.grid.axes[ax].periodic:
            raise InvalidParameterError("axis", f"axis {ax} is not periodic")
        inc = self.increments[ax]
        if self.grid.ndim == 1:
            return float(np.sum(inc))
        line = inc[:, index] if ax == 0 else inc[index, :]
        return float(np.sum(line))

    def gradient(self) -> np.ndarray:
        """Physical gradient of S from edge increments (central where possible)."""
        grid = self.grid
        scales = grid.metric_scale()
        comps = []
        for ax, axis in enumerate(grid.axes):
            inc = np.moveaxis(self.increments[ax], ax, 0)
            h = axis.spacing
            if axis.periodic:
                g = (inc + np.roll(inc, 1, axis=0)) / (2.0 * h)
            else:
                n = axis.nodes
                g = np.empty((n, *inc.shape[1:]))
                g[1:-1] = (inc[1:] + inc[:-1]) / (2.0 * h)
                g[0] = (3.0 * inc[0] - inc[1]) / (2.0 * h)
                g[-1] = (3.0 * inc[-1] - inc[-2]) / (2.0 * h)
            comps.append(np.moveaxis(g, 0, ax) * scales[ax])
        return np.stack(comps)

    def shifted(self, constant: float) -> "PhaseField":
        """S + constant (increments unchanged)."""
        h = self.planck
        unwrapped = self.unwrapped + constant
        if self.mask is not None:
            unwrapped = np.where(self.mask, 0.0, unwrapped)
        return PhaseField(
            grid=self.grid,
            hbar=self.hbar,
            principal=np.mod(self.principal + constant, h),
            increments=self.increments,
            unwrapped=unwrapped,
            mask=self.mask,
            regions=self.regions,
            disconnected=self.disconnected,
        )


def _neighbour_graph(grid: Grid, valid: np.ndarray) -> sp.csr_matrix:
    index = np.arange(grid.size).reshape(grid.shape)
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    for ax, axis in enumerate(grid.axes):
        nxt = np.roll(index, -1, axis=ax)
        ok = valid & np.roll(valid, -1, axis=ax)
        if not axis.periodic:
            sl = [slice(None)] * grid.ndim
            sl[ax] = -1
            ok = ok.copy()
            ok[tuple(sl)] = False
        rows.append(index[ok])
        cols.append(nxt[ok])
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    data = np.ones(r.size)
    graph = sp.coo_matrix((data, (r, c)), shape=(grid.size, grid.size))
    return (graph + graph.T).tocsr()


def _label_regions(grid: Grid, mask: np.ndarray | None) -> tuple[np.ndarray, bool]:
    valid = np.ones(grid.shape, dtype=bool) if mask is None else ~mask
    graph = _neighbour_graph(grid, valid)
    _, labels = connected_components(graph, directed=False)
    labels = labels.reshape(grid.shape)
    # renumber so masked nodes get -1 and valid regions count from 0
    out = np.full(grid.shape, -1, dtype=np.int64)
    valid_labels = np.unique(labels[valid])
    for new, old in enumerate(valid_labels):
        out[(labels == old) & valid] = new
    return out, len(valid_labels) > 1


def _tree_unwrap(grid: Grid, angle: np.ndarray, valid: np.ndarray, regions: np.ndarray) -> np.ndarray:
    """Integrate wrapped angle differences along a BFS spanning tree, per region."""
    graph = _neighbour_graph(grid, valid)
    flat_angle = angle.ravel()
    flat_regions = regions.ravel()
    out = np.zeros(grid.size)
    for region in range(int(flat_regions.max()) + 1):
        members = np.flatnonzero(flat_regions == region)
        root = int(members[0])
        order, preds = breadth_first_order(graph, root, directed=False, return_predecessors=True)
        out[root] = flat_angle[root]
        for node in order[1:]:
            parent = preds[node]
            out[node] = out[parent] + wrap_phase(flat_angle[node] - flat_angle[parent], 2.0 * math.pi)
    return out.reshape(grid.shape)


def polar_decompose(
    psi: ComplexField,
    hbar: float,
    node_floor: float = DEFAULT_NODE_FLOOR,
) -> tuple[ScalarField, PhaseField]:
    """Split psi into rho = |psi|^2 and a winding-aware phase S."""
    if node_floor < 0:
        raise InvalidParameterError("node_floor", "must be non-negative")
    grid = psi.grid
    rho = psi.density()
    peak = float(rho.max())
    if not peak > 0:
        raise InvalidParameterError("psi", "wave function is identically zero")
    mask = rho < node_floor * peak
    mask_or_none = mask if mask.any() else None
    angle = np.mod(np.angle(psi.values), 2.0 * math.pi)
    increments = tuple(hbar * wrap_phase(_forward(angle, grid, ax), 2.0 * math.pi) for ax in range(grid.ndim))
    regions, disconnected = _label_regions(grid, mask_or_none)
    valid = ~mask
    unwrapped = hbar * _tree_unwrap(grid, angle, valid, regions)
    if disconnected:
        LOG.warning("phase unwrap split into %d regions by the node mask", int(regions.max()) + 1)
    phase = PhaseField(
        grid=grid,
        hbar=hbar,
        principal=hbar * angle,
        increments=increments,
        unwrapped=np.where(valid, unwrapped, 0.0),
        mask=mask_or_none,
        regions=regions,
        disconnected=disconnected,
    )
    return ScalarField(grid, rho), phase


def recompose(rho: ScalarField, phase: PhaseField) -> ComplexField:
    """sqrt(rho) * exp(i S / hbar) from the principal values."""
    values = np.sqrt(rho.values) * np.exp(1j * phase.principal / phase.hbar)
    return ComplexField(rho.grid, values)
