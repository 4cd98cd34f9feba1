"""Reference quantum solvers and eigenstate generators."""

from zsmlab.schrodinger.eigen import (
    EigenstateResult,
    RadialSolution,
    central_eigenstate,
    line_eigenstate,
    radial_ground_state,
    ring_eigenstate,
    ring_spectrum,
    state_from_radial,
)
from zsmlab.schrodinger.evolution import (
    EvolutionTrajectory,
    LinearPropagator,
    evolve_linear,
    evolve_nonlinear_classical,
)
from zsmlab.schrodinger.operators import expectation_energy, hamiltonian_matrix
from zsmlab.schrodinger.states import (
    density_moments,
    free_gaussian_width,
    gaussian_packet,
    normalized,
)

__all__ = [
    "EigenstateResult",
    "EvolutionTrajectory",
    "LinearPropagator",
    "RadialSolution",
    "central_eigenstate",
    "density_moments",
    "evolve_linear",
    "evolve_nonlinear_classical",
    "expectation_energy",
    "free_gaussian_width",
    "gaussian_packet",
    "hamiltonian_matrix",
    "line_eigenstate",
    "normalized",
    "radial_ground_state",
    "ring_eigenstate",
    "ring_spectrum",
    "state_from_radial",
]
