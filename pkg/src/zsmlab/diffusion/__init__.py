"""Forward and backward diffusions: particle ensembles, Fokker-Planck and estimators."""

from zsmlab.diffusion.acceleration import AccelerationReport, mean_acceleration, velocity_time_derivative
from zsmlab.diffusion.ensemble import (
    EnsembleState,
    TrajectoryBundle,
    WienerStats,
    read_bundle,
    sample_ensemble,
    simulate,
    step_sde,
    write_bundle,
)
from zsmlab.diffusion.estimators import (
    MeanDerivativeEstimate,
    NodeAudit,
    NodeAuditReport,
    empirical_density,
    l1_distance,
    mean_derivative,
    node_avoidance_audit,
)
from zsmlab.diffusion.fokker_planck import (
    FokkerPlanckOperator,
    continuity_rhs,
    fokker_planck_rhs,
    fokker_planck_step,
)
from zsmlab.diffusion.rng import CounterStreams

__all__ = [
    "AccelerationReport",
    "CounterStreams",
    "EnsembleState",
    "FokkerPlanckOperator",
    "MeanDerivativeEstimate",
    "NodeAudit",
    "NodeAuditReport",
    "TrajectoryBundle",
    "WienerStats",
    "continuity_rhs",
    "empirical_density",
    "fokker_planck_rhs",
    "fokker_planck_step",
    "l1_distance",
    "mean_acceleration",
    "mean_derivative",
    "node_avoidance_audit",
    "read_bundle",
    "sample_ensemble",
    "simulate",
    "step_sde",
    "velocity_time_derivative",
    "write_bundle",
]
