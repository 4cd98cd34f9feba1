"""Physical constants and unit systems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Mapping

from zsmlab.core.errors import InvalidParameterError

UnitSystem = Literal["natural", "SI"]

# CODATA 2018, SI units.
CODATA_2018: dict[str, float] = {
    "electron_mass": 9.1093837015e-31,
    "hbar": 1.054571817e-34,
    "light_speed": 299792458.0,
    "elementary_charge": 1.602176634e-19,
    "epsilon0": 8.8541878128e-12,
    "electron_volt": 1.602176634e-19,
}

_OVERRIDE_KEYS = ("mass", "hbar", "light_speed", "charge", "epsilon0")


@dataclass(frozen=True)
class PhysicalConstants:
    """m, hbar, c, e with derived nu = hbar/2m and omega_c = mc^2/hbar.

    Derived values are properties so they can never drift from the stored inputs.
    `charge` is signed; the electron in SI carries -e.
    """

    mass: float
    hbar: float
    light_speed: float
    charge: float
    unit_system: UnitSystem = "natural"
    epsilon0: float | None = None
    overrides: tuple[tuple[str, float], ...] = field(default=(), compare=False)

    @property
    def diffusion(self) -> float:
        return self.hbar / (2.0 * self.mass)

    @property
    def compton_freq(self) -> float:
        return self.mass * self.light_speed**2 / self.hbar

    @property
    def planck(self) -> float:
        """h = 2*pi*hbar, the circulation quantum."""
        return 2.0 * math.pi * self.hbar

    @property
    def compton_length(self) -> float:
        return self.hbar / (self.mass * self.light_speed)

    @property
    def rest_energy(self) -> float:
        return self.mass * self.light_speed**2

    def with_diffusion_disabled(self) -> "PhysicalConstants":
        """Copy whose SDE noise is switched off (nu = 0 test hook, non-physical)."""
        return _NoiselessConstants(
            mass=self.mass,
            hbar=self.hbar,
            light_speed=self.light_speed,
            charge=self.charge,
            unit_system=self.unit_system,
            epsilon0=self.epsilon0,
            overrides=self.overrides,
        )


@dataclass(frozen=True)
class _NoiselessConstants(PhysicalConstants):
    @property
    def diffusion(self) -> float:
        return 0.0


def make_constants(
    unit_system: UnitSystem = "natural",
    overrides: Mapping[str, float] | None = None,
) -> PhysicalConstants:
    """Build constants for a unit system.

    natural: m = hbar = 1, c = 1, e = 1 unless overridden.
    SI: electron (CODATA 2018), charge -e.
    """
    overrides = dict(overrides or {})
    for key, value in overrides.items():
        if key not in _OVERRIDE_KEYS:
            raise InvalidParameterError(key, "unknown constant override")
        if key == "charge":
            continue
        if not value > 0:
            raise InvalidParameterError(key, f"must be positive, got {value!r}")

    if unit_system == "natural":
        base = {"mass": 1.0, "hbar": 1.0, "light_speed": 1.0, "charge": 1.0, "epsilon0": None}
    elif unit_system == "SI":
        base = {
            "mass": CODATA_2018["electron_mass"],
            "hbar": CODATA_2018["hbar"],
            "light_speed": CODATA_2018["light_speed"],
            "charge": -CODATA_2018["elementary_charge"],
            "epsilon0": CODATA_2018["epsilon0"],
        }
    else:
        raise InvalidParameterError("unit_system", f"expected 'natural' or 'SI', got {unit_system!r}")

    base.update(overrides)
    return PhysicalConstants(
        mass=float(base["mass"]),
        hbar=float(base["hbar"]),
        light_speed=float(base["light_speed"]),
        charge=float(base["charge"]),
        unit_system=unit_system,
        epsilon0=None if base["epsilon0"] is None else float(base["epsilon0"]),
        overrides=tuple(sorted((k, float(v)) for k, v in overrides.items())),
    )
