"""Initial wave functions."""

from __future__ import annotations

import math

import numpy as np

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import InvalidParameterError
from zsmlab.core.field import ComplexField
from zsmlab.core.grid import Grid


def normalized(grid: Grid, values: np.ndarray) -> ComplexField:
    norm = math.sqrt(float(np.sum(grid.weights * np.abs(values) ** 2)))
    if not norm > 0:
        raise InvalidParameterError("psi", "cannot normalize a zero state")
    return ComplexField(grid, values / norm)


def gaussian_packet(
    grid: Grid,
    k: PhysicalConstants,
    center: float = 0.0,
    sigma: float = 1.0,
    momentum: float = 0.0,
) -> ComplexField:
    """Gaussian whose density has standard deviation sigma, mean momentum p."""
    if grid.ndim != 1:
        raise InvalidParameterError("grid", "gaussian_packet is one-dimensional")
    x = grid.coords[0]
    values = np.exp(-((x - center) ** 2) / (4.0 * sigma**2) + 1j * momentum * x / k.hbar)
    if grid.axes[0].boundary == "absorbing":
        values[[0, -1]] = 0.0
    return normalized(grid, values)


def free_gaussian_width(sigma0: float, t: float, k: PhysicalConstants) -> float:
    """sigma(t) = sigma0 sqrt(1 + (hbar t / 2 m sigma0^2)^2)."""
    return sigma0 * math.sqrt(1.0 + (k.hbar * t / (2.0 * k.mass * sigma0**2)) ** 2)


def density_moments(grid: Grid, rho: np.ndarray) -> tuple[float, float]:
    """Mean and standard deviation of a 1-D density."""
    x = grid.coords[0]
    w = grid.weights * rho
    total = float(np.sum(w))
    mean = float(np.sum(w * x)) / total
    var = float(np.sum(w * (x - mean) ** 2)) / total
    return mean, math.sqrt(var)
