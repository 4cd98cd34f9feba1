"""Uniform grids on the four supported topologies.

Bounded Cartesian axes are vertex centred (nodes on both endpoints, trapezoid
weights). Periodic axes use the rectangle rule. The radial axis of a disk is
cell centred, r_i = (i + 1/2) dr, so no node sits on the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np

from zsmlab.core.errors import GridMismatchError, InvalidParameterError

Topology = Literal["line", "ring", "plane", "disk-polar"]
Boundary = Literal["periodic", "reflecting", "absorbing"]

MIN_NODES = 8


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    length: float
    nodes: int
    boundary: Boundary
    cell_centred: bool = False

    def __post_init__(self) -> None:
        if self.nodes < MIN_NODES:
            raise InvalidParameterError(f"{self.name}.nodes", f"need at least {MIN_NODES}, got {self.nodes}")
        if not self.length > 0:
            raise InvalidParameterError(f"{self.name}.length", f"must be positive, got {self.length}")
        if self.boundary not in ("periodic", "reflecting", "absorbing"):
            raise InvalidParameterError(f"{self.name}.boundary", f"unknown boundary {self.boundary!r}")

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"

    @property
    def spacing(self) -> float:
        if self.periodic or self.cell_centred:
            return self.length / self.nodes
        return self.length / (self.nodes - 1)

    @property
    def stop(self) -> float:
        return self.start + self.length

    def coords(self) -> np.ndarray:
        h = self.spacing
        idx = np.arange(self.nodes, dtype=float)
        if self.cell_centred:
            return self.start + (idx + 0.5) * h
        return self.start + idx * h

    def weights(self) -> np.ndarray:
        h = self.spacing
        w = np.full(self.nodes, h)
        if not self.periodic and not self.cell_centred:
            w[0] = w[-1] = 0.5 * h
        return w


@dataclass(frozen=True)
class Grid:
    topology: Topology
    axes: tuple[Axis, ...]
    radius: float = 1.0

    def __post_init__(self) -> None:
        expected = {"line": 1, "ring": 1, "plane": 2, "disk-polar": 2}.get(self.topology)
        if expected is None:
            raise InvalidParameterError("topology", f"unknown topology {self.topology!r}")
        if len(self.axes) != expected:
            raise InvalidParameterError("axes", f"{self.topology} needs {expected} axes, got {len(self.axes)}")
        if self.topology == "ring" and not self.axes[0].periodic:
            raise InvalidParameterError("axes", "ring axis must be periodic")
        if self.topology == "disk-polar":
            if not self.axes[1].periodic or self.axes[0].periodic:
                raise InvalidParameterError("axes", "disk-polar needs a bounded radius and periodic angle")
            if not math.isclose(self.axes[1].length, 2.0 * math.pi):
                raise InvalidParameterError("axes", "polar angle period must be 2*pi")
        if self.topology == "ring" and not math.isclose(self.axes[0].length, 2.0 * math.pi * self.radius):
            raise InvalidParameterError("axes", "ring arc length must equal 2*pi*radius")

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.nodes for a in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(a.spacing for a in self.axes)

    @property
    def is_polar(self) -> bool:
        return self.topology == "disk-polar"

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        return tuple(a.coords() for a in self.axes)

    @cached_property
    def mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.coords, indexing="ij"))

    @cached_property
    def weights(self) -> np.ndarray:
        """Quadrature weight per node (includes the r Jacobian on the disk)."""
        if self.ndim == 1:
            return self.axes[0].weights()
        w = np.multiply.outer(self.axes[0].weights(), self.axes[1].weights())
        if self.is_polar:
            w = w * self.coords[0][:, None]
        return w

    @cached_property
    def radial(self) -> np.ndarray:
        """Distance from the origin (disk) or from zero along each axis (line, plane)."""
        if self.is_polar:
            return self.mesh[0]
        if self.topology == "ring":
            return np.full(self.shape, self.radius)
        return np.sqrt(sum(m**2 for m in self.mesh))

    @cached_property
    def angle(self) -> np.ndarray:
        if self.topology == "ring":
            return self.coords[0] / self.radius
        if self.is_polar:
            return self.mesh[1]
        if self.topology == "plane":
            return np.arctan2(self.mesh[1], self.mesh[0])
        raise InvalidParameterError("topology", "line grids have no angle")

    @cached_property
    def cartesian(self) -> tuple[np.ndarray, ...]:
        """Node positions in Cartesian coordinates (x,) or (x, y)."""
        if self.is_polar:
            r, phi = self.mesh
            return (r * np.cos(phi), r * np.sin(phi))
        if self.topology == "ring":
            theta = self.angle
            return (self.radius * np.cos(theta), self.radius * np.sin(theta))
        return self.mesh

    def metric_scale(self) -> tuple[np.ndarray | float, ...]:
        """Per-axis factor turning coordinate derivatives into physical ones."""
        if self.is_polar:
            return (1.0, 1.0 / self.mesh[0])
        return tuple(1.0 for _ in self.axes)

    def boundary_nodes(self, boundary: Boundary) -> np.ndarray:
        """Bool mask of endpoint nodes on non-periodic axes with the given boundary."""
        out = np.zeros(self.shape, dtype=bool)
        for ax, axis in enumerate(self.axes):
            if axis.boundary != boundary or axis.periodic:
                continue
            sl: list[slice | int] = [slice(None)] * self.ndim
            if not axis.cell_centred:
                sl[ax] = 0
                out[tuple(sl)] = True
            sl[ax] = -1
            out[tuple(sl)] = True
        return out

    def require_same(self, other: "Grid") -> None:
        if other != self:
            raise GridMismatchError(f"grid mismatch: {self.describe()} vs {other.describe()}")

    def describe(self) -> str:
        dims = "x".join(str(n) for n in self.shape)
        return f"{self.topology}[{dims}]"


def line_grid(start: float, stop: float, nodes: int, boundary: Boundary = "absorbing") -> Grid:
    return Grid("line", (Axis("x", start, stop - start, nodes, boundary),))


def ring_grid(nodes: int, radius: float = 1.0) -> Grid:
    if not radius > 0:
        raise InvalidParameterError("radius", f"must be positive, got {radius}")
    return Grid("ring", (Axis("s", 0.0, 2.0 * math.pi * radius, nodes, "periodic"),), radius=radius)


def plane_grid(
    x_range: tuple[float, float],
    y_range: tuple[float, float],
    nodes: tuple[int, int],
    boundaries: tuple[Boundary, Boundary] = ("absorbing", "absorbing"),
) -> Grid:
    return Grid(
        "plane",
        (
            Axis("x", x_range[0], x_range[1] - x_range[0], nodes[0], boundaries[0]),
            Axis("y", y_range[0], y_range[1] - y_range[0], nodes[1], boundaries[1]),
        ),
    )


def disk_grid(radius: float, radial_nodes: int, angular_nodes: int, boundary: Boundary = "absorbing") -> Grid:
    if boundary == "periodic":
        raise InvalidParameterError("boundary", "disk edge cannot be periodic")
    return Grid(
        "disk-polar",
        (
            Axis("r", 0.0, radius, radial_nodes, boundary, cell_centred=True),
            Axis("phi", 0.0, 2.0 * math.pi, angular_nodes, "periodic"),
        ),
        radius=radius,
    )
