"""Discretized fields on a Grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from zsmlab.core.errors import DensityError, GridMismatchError, InvalidParameterError
from zsmlab.core.grid import Grid


def _freeze(values: np.ndarray, mask: np.ndarray | None, dtype: type) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    if mask is not None:
        arr[..., mask] = 0
    arr.setflags(write=False)
    return arr


def _check_mask(grid: Grid, mask: np.ndarray | None) -> np.ndarray | None:
    if mask is None:
        return None
    mask = np.array(mask, dtype=bool, copy=True)
    if mask.shape != grid.shape:
        raise GridMismatchError(f"mask shape {mask.shape} != grid shape {grid.shape}")
    if not mask.any():
        return None
    mask.setflags(write=False)
    return mask


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid
    values: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self) -> None:
        mask = _check_mask(self.grid, self.mask)
        values = _freeze(self.values, mask, float)
        if values.shape != self.grid.shape:
            raise GridMismatchError(f"scalar values {values.shape} != grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("values", "non-finite entries in scalar field")
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "values", values)

    @property
    def valid(self) -> np.ndarray:
        return np.ones(self.grid.shape, dtype=bool) if self.mask is None else ~self.mask

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return ScalarField(self.grid, values, self.mask)


@dataclass(frozen=True, eq=False)
class VectorField:
    grid: Grid
    values: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self) -> None:
        mask = _check_mask(self.grid, self.mask)
        values = _freeze(self.values, mask, float)
        if values.shape != (self.grid.ndim, *self.grid.shape):
            raise GridMismatchError(f"vector values {values.shape} != ({self.grid.ndim}, {self.grid.shape})")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("values", "non-finite entries in vector field")
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "values", values)

    @property
    def valid(self) -> np.ndarray:
        return np.ones(self.grid.shape, dtype=bool) if self.mask is None else ~self.mask

    def norm_sq(self) -> np.ndarray:
        return np.sum(self.values**2, axis=0)

    def __add__(self, other: "VectorField") -> "VectorField":
        self.grid.require_same(other.grid)
        return VectorField(self.grid, self.values + other.values, merge_masks(self.mask, other.mask))

    def __sub__(self, other: "VectorField") -> "VectorField":
        self.grid.require_same(other.grid)
        return VectorField(self.grid, self.values - other.values, merge_masks(self.mask, other.mask))

    def scaled(self, factor: float) -> "VectorField":
        return VectorField(self.grid, self.values * factor, self.mask)


@dataclass(frozen=True, eq=False)
class ComplexField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = _freeze(self.values, None, complex)
        if values.shape != self.grid.shape:
            raise GridMismatchError(f"complex values {values.shape} != grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("values", "non-finite entries in complex field")
        object.__setattr__(self, "values", values)

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.grid.weights * self.density())))


def merge_masks(*masks: np.ndarray | None) -> np.ndarray | None:
    present = [m for m in masks if m is not None]
    if not present:
        return None
    out = present[0].copy()
    for m in present[1:]:
        out |= m
    return out


def integrate(grid: Grid, values: np.ndarray) -> float:
    return float(np.sum(grid.weights * values))


def normalize_density(rho: ScalarField) -> ScalarField:
    values = rho.values
    negative = np.argwhere(values < 0)
    if negative.size:
        raise DensityError(tuple(int(i) for i in negative[0]), "density is negative")
    total = integrate(rho.grid, values)
    if not total > 0:
        raise DensityError(
            None, f"density integrates to zero over all {rho.grid.size} nodes of the {rho.grid.topology} grid"
        )
    return ScalarField(rho.grid, values / total, rho.mask)

