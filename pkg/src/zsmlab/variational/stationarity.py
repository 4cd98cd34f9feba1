"""Numerical first variation of the mean action.

Each path is displaced by delta q = eps w(t) g(q) with w vanishing at both
ends. Holding rho fixed, the mean derivatives of the displaced path are

    D q'  = b  + eps (w' g + w (b  g' + nu g''))
    D* q' = b* + eps (w' g + w (b* g' - nu g''))

and J(q') - J(q) is evaluated exactly on the time and space grids. It is
O(eps^2) when (rho, v, u) satisfies the mean acceleration equation and
O(eps) otherwise.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import EndpointConstraintError, InvalidParameterError
from zsmlab.variational.action import ActionEstimate, _time_weights, field_action
from zsmlab.variational.histories import StateHistory

LOG = logging.getLogger("zsmlab.variational")

Family = Literal["sinusoidal", "bump", "shift"]
Window = Literal["sine", "constant"]

DEFAULT_EPSILONS = (1e-3, 2e-3, 4e-3, 8e-3)
STATIONARY_POWER = 1.9
ENDPOINT_TOL = 1e-12


@dataclass(frozen=True)
class Perturbation:
    family: Family = "sinusoidal"
    mode: int = 1
    center: float = 0.0
    width: float = 0.5
    window: Window = "sine"

    def profile(self, history: StateHistory) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """g, g' and g'' at the grid nodes."""
        axis = history.grid.axes[0]
        x = history.grid.coords[0]
        if self.family == "shift":
            ones = np.ones_like(x)
            return ones, np.zeros_like(x), np.zeros_like(x)
        if self.family == "sinusoidal":
            kx = 2.0 * math.pi * self.mode / axis.length
            phase = kx * (x - axis.start)
            return np.sin(phase), kx * np.cos(phase), -(kx**2) * np.sin(phase)
        if self.family == "bump":
            if not self.width > 0:
                raise InvalidParameterError("width", "bump width must be positive")
            d = x - self.center
            if axis.periodic:
                d = (d + 0.5 * axis.length) % axis.length - 0.5 * axis.length
            w2 = self.width**2
            g = np.exp(-(d**2) / w2)
            return g, -2.0 * d / w2 * g, (4.0 * d**2 / w2**2 - 2.0 / w2) * g
        raise InvalidParameterError("family", f"unknown perturbation family {self.family!r}")

    def envelope(self, times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """w(t) and w'(t); raises when w does not vanish at both ends."""
        t0, t1 = float(times[0]), float(times[-1])
        span = t1 - t0
        if self.window == "sine":
            arg = math.pi * (times - t0) / span
            w = np.sin(arg)
            w[0] = 0.0
            w[-1] = 0.0
            dw = (math.pi / span) * np.cos(arg)
        elif self.window == "constant":
            w, dw = np.ones_like(times), np.zeros_like(times)
        else:
            raise InvalidParameterError("window", f"unknown window {self.window!r}")
        if abs(w[0]) > ENDPOINT_TOL or abs(w[-1]) > ENDPOINT_TOL:
            raise EndpointConstraintError(f"{self.window} window does not vanish at t={t0:g} and t={t1:g}")
        return w, dw


@dataclass(frozen=True)
class StationarityReport:
    state: str
    family: str
    action: ActionEstimate
    epsilons: tuple[float, ...]
    deltas: tuple[float, ...]
    fit_power: float
    first_variation: float

    @property
    def stationary(self) -> bool:
        return self.fit_power >= STATIONARY_POWER

    def to_json(self) -> dict[str, object]:
        return {
            "state": self.state,
            "family": self.family,
            "action": self.action.value,
            "parts": dict(self.action.parts),
            "fit_power": self.fit_power,
            "epsilons": list(self.epsilons),
            "deltas": list(self.deltas),
            "first_variation": self.first_variation,
            "stationary": self.stationary,
        }


def action_change(
    history: StateHistory,
    k: PhysicalConstants,
    perturbation: Perturbation,
    eps: float,
) -> float:
    """J(q + eps w g) - J(q) with rho held fixed."""
    g, dg, d2g = perturbation.profile(history)
    w, dw = perturbation.envelope(history.times)
    tw = _time_weights(history.times)
    nu = k.diffusion
    x = history.grid.coords[0]
    b = history.current + history.osmotic
    b_star = history.current - history.osmotic
    w_col, dw_col = w[:, None], dw[:, None]
    d_f = dw_col * g + w_col * (b * dg + nu * d2g)
    d_star_f = dw_col * g + w_col * (b_star * dg - nu * d2g)
    kinetic = 0.25 * k.mass * (
        2.0 * eps * (b * d_f + b_star * d_star_f) + eps**2 * (d_f**2 + d_star_f**2)
    )
    total = 0.0
    for i, t in enumerate(history.times):
        shifted = history.potential(x + eps * w[i] * g, float(t)) - history.potential(x, float(t))
        total += tw[i] * float(np.sum(history.grid.weights * history.rho[i] * (kinetic[i] - shifted)))
    return total


def fit_power(epsilons: np.ndarray, deltas: np.ndarray) -> float:
    """Slope of log|dJ| against log eps."""
    magnitude = np.maximum(np.abs(deltas), np.finfo(float).tiny)
    slope, _ = np.polyfit(np.log(epsilons), np.log(magnitude), 1)
    return float(slope)


def stationarity_test(
    history: StateHistory,
    k: PhysicalConstants,
    perturbation: Perturbation | None = None,
    epsilons: tuple[float, ...] = DEFAULT_EPSILONS,
) -> StationarityReport:
    perturbation = perturbation or Perturbation()
    if len(epsilons) < 2 or any(not e > 0 for e in epsilons):
        raise InvalidParameterError("epsilons", "need at least two positive amplitudes")
    eps = np.asarray(sorted(epsilons), dtype=float)
    deltas = np.array([action_change(history, k, perturbation, float(e)) for e in eps])
    # odd part of dJ isolates the linear coefficient
    small = float(eps[0])
    linear = (deltas[0] - action_change(history, k, perturbation, -small)) / (2.0 * small)
    base = field_action(history.slices(), history.grid, history.potentials(), k)
    report = StationarityReport(
        state=history.name,
        family=perturbation.family,
        action=base,
        epsilons=tuple(float(e) for e in eps),
        deltas=tuple(float(d) for d in deltas),
        fit_power=fit_power(eps, deltas),
        first_variation=float(linear),
    )
    LOG.info(
        "stationarity=%s",
        json.dumps(
            {"state": report.state, "family": report.family, "fit_power": report.fit_power, "stationary": report.stationary},
            ensure_ascii=True,
        ),
    )
    return report
