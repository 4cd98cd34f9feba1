"""The classical zitterbewegung particle: phase, loops, shifts and Bohr orbits."""

from zsmlab.zbw.bohr import (
    BohrOrbit,
    bohr_orbit,
    bohr_table,
    circular_orbit_path,
    coulomb_path_potentials,
    coulomb_strength,
    integrate_orbit,
    write_bohr_table,
)
from zsmlab.zbw.hamilton_jacobi import ClassicalHJReport, classical_hj_residual
from zsmlab.zbw.phase import (
    FREE,
    LoopPhase,
    PathPotentials,
    PathSample,
    ZbwPhaseRecord,
    energy_momentum,
    loop_phase,
    phase_accumulate,
)
from zsmlab.zbw.shifts import STATVOLT_IN_VOLTS, FrequencyShift, frequency_shift, uniform_field_potential

__all__ = [
    "FREE",
    "STATVOLT_IN_VOLTS",
    "BohrOrbit",
    "ClassicalHJReport",
    "FrequencyShift",
    "LoopPhase",
    "PathPotentials",
    "PathSample",
    "ZbwPhaseRecord",
    "bohr_orbit",
    "bohr_table",
    "circular_orbit_path",
    "classical_hj_residual",
    "coulomb_path_potentials",
    "coulomb_strength",
    "energy_momentum",
    "frequency_shift",
    "integrate_orbit",
    "loop_phase",
    "phase_accumulate",
    "uniform_field_potential",
    "write_bohr_table",
]
