"""Madelung residuals, extraneous central solutions and the quantization gate."""

from zsmlab.hjm.gate import GateVerdict, gate_loops, quantization_gate
from zsmlab.hjm.residuals import (
    ResidualReport,
    hjm_residuals,
    local_energy,
    stationary_frames,
    stationary_phase,
)
from zsmlab.hjm.wallstrom import (
    SuperpositionReport,
    WallstromSolution,
    azimuthal_phase,
    classify,
    ring_superposition_check,
    wallstrom_extraneous_solution,
    winding_factor,
)

__all__ = [
    "GateVerdict",
    "ResidualReport",
    "SuperpositionReport",
    "WallstromSolution",
    "azimuthal_phase",
    "classify",
    "gate_loops",
    "hjm_residuals",
    "local_energy",
    "quantization_gate",
    "ring_superposition_check",
    "stationary_frames",
    "stationary_phase",
    "wallstrom_extraneous_solution",
    "winding_factor",
]
