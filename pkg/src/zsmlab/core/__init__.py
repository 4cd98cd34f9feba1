"""Shared domain types: constants, grids, fields, potentials, configuration."""

from zsmlab.core.constants import CODATA_2018, PhysicalConstants, make_constants
from zsmlab.core.field import (
    ComplexField,
    ScalarField,
    VectorField,
    integrate,
    merge_masks,
    normalize_density,
)
from zsmlab.core.grid import Axis, Grid, disk_grid, line_grid, plane_grid, ring_grid
from zsmlab.core.potentials import (
    Potentials,
    coulomb,
    free,
    harmonic,
    radial_potential,
    uniform_electric,
    uniform_gravity,
    uniform_magnetic,
)

__all__ = [
    "Axis",
    "CODATA_2018",
    "ComplexField",
    "Grid",
    "PhysicalConstants",
    "Potentials",
    "ScalarField",
    "VectorField",
    "coulomb",
    "disk_grid",
    "free",
    "harmonic",
    "integrate",
    "line_grid",
    "make_constants",
    "merge_masks",
    "normalize_density",
    "plane_grid",
    "radial_potential",
    "ring_grid",
    "uniform_electric",
    "uniform_gravity",
    "uniform_magnetic",
]
