"""Pointwise residuals of the classical Hamilton-Jacobi equation.

non-relativistic:  dS/dt + |grad S - eA/c|^2 / 2m + mc^2 + m Phi_g + e Phi_e + V = 0
relativistic:      (dS/dt + e Phi_e + V)^2 - c^2 |grad S - eA/c|^2 - (mc^2 + m Phi_g)^2 = 0

The relativistic residual is divided by 2 (mc^2 + m Phi_g) so both forms are
in energy units and agree for slow motion.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import InvalidParameterError
from zsmlab.zbw.phase import PathPotentials, ZbwPhaseRecord

LOG = logging.getLogger("zsmlab.zbw")


@dataclass(frozen=True, eq=False)
class ClassicalHJReport:
    residual: np.ndarray
    l2: float
    linf: float
    relativistic: bool
    superluminal: tuple[int, ...] = ()

    def passed(self, tol: float) -> bool:
        return self.linf <= tol and not self.superluminal

    def to_json(self) -> dict[str, object]:
        return {
            "l2": self.l2,
            "linf": self.linf,
            "relativistic": self.relativistic,
            "superluminal": list(self.superluminal),
        }


def classical_hj_residual(
    source: np.ndarray | ZbwPhaseRecord,
    pot: PathPotentials,
    k: PhysicalConstants,
    *,
    ds_dt: np.ndarray | None = None,
    relativistic: bool = False,
) -> ClassicalHJReport:
    """Residual at sample points from grad S (N, d) and dS/dt (N,).

    A ZbwPhaseRecord may be passed instead: its p' and E along the path
    stand in for grad S and -dS/dt, and its own relativistic flag is used.
    """
    if isinstance(source, ZbwPhaseRecord):
        grad = source.momentum
        time_rate = -source.energy
        relativistic = source.relativistic
    else:
        if ds_dt is None:
            raise InvalidParameterError("ds_dt", "required when grad S is given as an array")
        grad = np.asarray(source, dtype=float)
        if grad.ndim == 1:
            grad = grad[:, None]
        time_rate = np.broadcast_to(np.asarray(ds_dt, dtype=float), grad.shape[:1])
    n, dim = grad.shape
    v_pot, phi_g, phi_e, vec_a = pot.parts(n, dim)
    kinetic_momentum = grad - (k.charge / k.light_speed) * vec_a
    p2 = np.sum(kinetic_momentum**2, axis=1)
    rest = k.rest_energy + k.mass * phi_g
    superluminal: tuple[int, ...] = ()
    if relativistic:
        mechanical = -time_rate - k.charge * phi_e - v_pot
        residual = (mechanical**2 - k.light_speed**2 * p2 - rest**2) / (2.0 * rest)
        fast = np.flatnonzero(k.light_speed * np.sqrt(p2) >= np.abs(mechanical))
        superluminal = tuple(int(i) for i in fast)
    else:
        residual = time_rate + p2 / (2.0 * k.mass) + rest + k.charge * phi_e + v_pot
    report = ClassicalHJReport(
        residual=residual,
        l2=float(np.sqrt(np.mean(residual**2))),
        linf=float(np.max(np.abs(residual))),
        relativistic=relativistic,
        superluminal=superluminal,
    )
    if superluminal:
        LOG.warning("classical_hj_superluminal=%s", json.dumps({"count": len(superluminal)}))
    return report
