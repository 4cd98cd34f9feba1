"""Derived fields: rho/S from psi, velocities, quantum kinetic, circulation."""

from zsmlab.fields.kinematics import (
    KinematicFields,
    current_velocity,
    interior_node_region,
    kinematic_fields,
    node_mask,
    osmotic_velocity,
    quantum_kinetic,
)
from zsmlab.fields.phase import DEFAULT_NODE_FLOOR, PhaseField, polar_decompose, recompose
from zsmlab.fields.winding import (
    WindingReport,
    angular_loop,
    circulation,
    enclosing_loops,
    non_contractible_loops,
    plaquette_loop,
    rectangle_loop,
    ring_loop,
)

__all__ = [
    "DEFAULT_NODE_FLOOR",
    "KinematicFields",
    "PhaseField",
    "WindingReport",
    "angular_loop",
    "circulation",
    "current_velocity",
    "interior_node_region",
    "enclosing_loops",
    "kinematic_fields",
    "node_mask",
    "non_contractible_loops",
    "osmotic_velocity",
    "plaquette_loop",
    "polar_decompose",
    "quantum_kinetic",
    "recompose",
    "rectangle_loop",
    "ring_loop",
]
