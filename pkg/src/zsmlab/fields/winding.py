"""Circulation of S around closed grid loops."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import InvalidParameterError, MaskedLoopError
from zsmlab.core.field import VectorField
from zsmlab.core.grid import Grid
from zsmlab.fields.phase import PhaseField

Node = tuple[int, ...]


@dataclass(frozen=True)
class WindingReport:
    label: str
    loop: tuple[Node, ...]
    circulation: float
    n: int
    residual: float
    tolerance: float
    accepted: bool
    flux_correction: float = 0.0
    kinetic_circulation: float = 0.0
    winding: float = field(default=0.0)

    def to_json(self) -> str:
        data = asdict(self)
        data["loop"] = [list(node) for node in self.loop][:8]
        return json.dumps(data, ensure_ascii=True)


def _step(grid: Grid, a: Node, b: Node) -> tuple[int, int]:
    """Axis and direction (+1/-1) of the edge a -> b; error if not neighbours."""
    diff = [bj - aj for aj, bj in zip(a, b)]
    moved = [ax for ax, d in enumerate(diff) if d != 0]
    if len(moved) != 1:
        raise InvalidParameterError("loop", f"{a} -> {b} is not a grid edge")
    ax = moved[0]
    d = diff[ax]
    n = grid.axes[ax].nodes
    if grid.axes[ax].periodic and abs(d) == n - 1:
        d = -1 if d > 0 else 1
    if abs(d) != 1:
        raise InvalidParameterError("loop", f"{a} -> {b} is not a grid edge")
    return ax, d


def _close(loop: Sequence[Sequence[int]]) -> tuple[Node, ...]:
    nodes = tuple(tuple(int(i) for i in node) for node in loop)
    if len(nodes) < 2:
        raise InvalidParameterError("loop", "needs at least two nodes")
    if nodes[0] != nodes[-1]:
        nodes = nodes + (nodes[0],)
    return nodes


def _edge_value(values: np.ndarray, grid: Grid, a: Node, ax: int, d: int) -> float:
    """Increment S[b] - S[a] for the edge leaving a along ax in direction d."""
    if d > 0:
        return float(values[a])
    start = list(a)
    start[ax] = (start[ax] - 1) % grid.axes[ax].nodes
    return -float(values[tuple(start)])


def loop_flux(grid: Grid, loop: tuple[Node, ...], vector_potential: VectorField) -> float:
    """Discrete line integral of A around the loop (equals the enclosed plaquette curl sum)."""
    total = 0.0
    scales = grid.metric_scale()
    for a, b in zip(loop[:-1], loop[1:]):
        ax, d = _step(grid, a, b)
        comp = vector_potential.values[ax]
        mean = 0.5 * (comp[a] + comp[b])
        scale = scales[ax]
        length = grid.axes[ax].spacing
        if isinstance(scale, np.ndarray):
            length = length / (0.5 * (scale[a] + scale[b]))
        total += d * mean * length
    return total


def circulation(
    phase: PhaseField,
    loop: Sequence[Sequence[int]],
    k: PhysicalConstants,
    vector_potential: VectorField | None = None,
    tol: float = 1e-6,
    label: str = "loop",
) -> WindingReport:
    """Sum of S increments around a closed loop; accepted if within tol*h of n*h."""
    grid = phase.grid
    nodes = _close(loop)
    mask = phase.mask
    total = 0.0
    for a, b in zip(nodes[:-1], nodes[1:]):
        if mask is not None and mask[a]:
            raise MaskedLoopError(a)
        ax, d = _step(grid, a, b)
        total += _edge_value(phase.increments[ax], grid, a, ax, d)
    h = phase.planck
    n = int(np.rint(total / h))
    residual = abs(total - n * h)
    flux_correction = 0.0
    if vector_potential is not None:
        grid.require_same(vector_potential.grid)
        flux_correction = (k.charge / k.light_speed) * loop_flux(grid, nodes, vector_potential)
    return WindingReport(
        label=label,
        loop=nodes,
        circulation=total,
        n=n,
        residual=residual,
        tolerance=tol * h,
        accepted=residual <= tol * h,
        flux_correction=flux_correction,
        kinetic_circulation=total - flux_correction,
        winding=total / h,
    )


def ring_loop(grid: Grid) -> list[Node]:
    if grid.topology != "ring":
        raise InvalidParameterError("grid", "ring_loop needs a ring grid")
    return [(i,) for i in range(grid.shape[0])]


def angular_loop(grid: Grid, radial_index: int) -> list[Node]:
    """Counter-clockwise circle at fixed radius on a disk."""
    if not grid.is_polar:
        raise InvalidParameterError("grid", "angular_loop needs a disk-polar grid")
    return [(radial_index, j) for j in range(grid.shape[1])]


def periodic_cycle(grid: Grid, ax: int, index: int) -> list[Node]:
    n = grid.shape[ax]
    if ax == 0:
        return [(i, index) for i in range(n)]
    return [(index, j) for j in range(n)]


def plaquette_loop(i: int, j: int, grid: Grid) -> list[Node]:
    n0, n1 = grid.shape
    i1 = (i + 1) % n0
    j1 = (j + 1) % n1
    return [(i, j), (i1, j), (i1, j1), (i, j1)]


def rectangle_loop(lo: tuple[int, int], hi: tuple[int, int]) -> list[Node]:
    """Counter-clockwise boundary of the index rectangle [lo, hi]."""
    (i0, j0), (i1, j1) = lo, hi
    path: list[Node] = [(i, j0) for i in range(i0, i1)]
    path += [(i1, j) for j in range(j0, j1)]
    path += [(i, j1) for i in range(i1, i0, -1)]
    path += [(i0, j) for j in range(j1, j0, -1)]
    return path


def enclosing_loops(grid: Grid, mask: np.ndarray | None) -> list[tuple[str, list[Node]]]:
    """Smallest plaquette-composed loop around every interior masked component."""
    if mask is None or grid.ndim != 2:
        return []
    loops: list[tuple[str, list[Node]]] = []
    labels, count = ndimage.label(mask)
    for comp in range(1, count + 1):
        where = np.argwhere(labels == comp)
        (i_lo, j_lo), (i_hi, j_hi) = where.min(axis=0), where.max(axis=0)
        if grid.is_polar:
            if i_lo == 0 and j_lo == 0 and j_hi == grid.shape[1] - 1:
                ring = _first_clear_ring(mask, i_hi + 1)
                if ring is not None:
                    loops.append((f"node-{comp}", angular_loop(grid, ring)))
                continue
        lo = (int(i_lo) - 1, int(j_lo) - 1)
        hi = (int(i_hi) + 1, int(j_hi) + 1)
        loop = _grow_rectangle(grid, mask, lo, hi)
        if loop is not None:
            loops.append((f"node-{comp}", loop))
    return loops


def _first_clear_ring(mask: np.ndarray, start: int) -> int | None:
    for i in range(start, mask.shape[0]):
        if not mask[i].any():
            return i
    return None


def _grow_rectangle(grid: Grid, mask: np.ndarray, lo: tuple[int, int], hi: tuple[int, int]) -> list[Node] | None:
    n0, n1 = grid.shape
    for _ in range(max(n0, n1)):
        if lo[0] < 0 or lo[1] < 0 or hi[0] >= n0 or hi[1] >= n1:
            # component touches the outer edge: not an interior node region
            return None
        loop = rectangle_loop(lo, hi)
        if not any(mask[node] for node in loop):
            return loop
        lo = (lo[0] - 1, lo[1] - 1)
        hi = (hi[0] + 1, hi[1] + 1)
    return None


def non_contractible_loops(grid: Grid, mask: np.ndarray | None) -> list[tuple[str, list[Node]]]:
    """Cycles that wrap the topology: the ring itself, the innermost clear circle on a disk,
    row/column cycles on a periodic plane."""
    clear = np.zeros(grid.shape, dtype=bool) if mask is None else mask
    if grid.topology == "ring":
        return [("ring", ring_loop(grid))]
    if grid.is_polar:
        ring = _first_clear_ring(clear, 0)
        return [] if ring is None else [(f"circle-{ring}", angular_loop(grid, ring))]
    loops: list[tuple[str, list[Node]]] = []
    if grid.topology == "plane":
        for ax, axis in enumerate(grid.axes):
            if not axis.periodic:
                continue
            other = 1 - ax
            for index in range(grid.shape[other]):
                cycle = periodic_cycle(grid, ax, index)
                if not any(clear[node] for node in cycle):
                    loops.append((f"cycle-{axis.name}-{index}", cycle))
                    break
    return loops

