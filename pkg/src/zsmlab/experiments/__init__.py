"""Experiment registry and the reproducible experiment pipelines."""

from __future__ import annotations

from zsmlab.experiments.core_experiments import (
    ALL_EXPERIMENTS,
    Experiment,
    ExperimentContext,
    ExperimentVerdict,
    Metric,
    PlotSpec,
    experiment_names,
    get_experiment,
)
from zsmlab.experiments import (
    bohr_table,
    central_resolution,
    equivariance,
    fp_vs_ensemble,
    frequency_shifts,
    mean_acceleration,
    node_avoidance,
    nonlinear_classical,
    ring_spectrum,
    superposition_singlevalue,
    variational_stationarity,
    wallstrom_gate,
)
from zsmlab.experiments.runner import run_experiment

__all__ = [
    "ALL_EXPERIMENTS",
    "Experiment",
    "ExperimentContext",
    "ExperimentVerdict",
    "Metric",
    "PlotSpec",
    "experiment_names",
    "get_experiment",
    "run_experiment",
]
