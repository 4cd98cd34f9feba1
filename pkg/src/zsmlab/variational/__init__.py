"""Mean action estimators and the numerical stationarity test."""

from zsmlab.variational.action import (
    ActionEstimate,
    StateSlice,
    discrete_action,
    field_action,
    monte_carlo_action,
)
from zsmlab.variational.histories import (
    StateHistory,
    coherent_state_history,
    free_gaussian_fields,
    free_gaussian_history,
    harmonic_ground_history,
    ring_plane_wave_history,
)
from zsmlab.variational.stationarity import (
    DEFAULT_EPSILONS,
    Perturbation,
    StationarityReport,
    action_change,
    fit_power,
    stationarity_test,
)

__all__ = [
    "DEFAULT_EPSILONS",
    "ActionEstimate",
    "Perturbation",
    "StateHistory",
    "StateSlice",
    "StationarityReport",
    "action_change",
    "coherent_state_history",
    "discrete_action",
    "field_action",
    "fit_power",
    "free_gaussian_fields",
    "free_gaussian_history",
    "harmonic_ground_history",
    "monte_carlo_action",
    "ring_plane_wave_history",
    "stationarity_test",
]
