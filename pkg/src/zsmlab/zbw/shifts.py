"""Shifts of the zbw rest-frame frequency by external potentials."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from zsmlab.core.constants import PhysicalConstants

# 1 statvolt in volts (c / 10^6 in SI digits)
STATVOLT_IN_VOLTS = 299.792458


@dataclass(frozen=True)
class FrequencyShift:
    omega_c: float
    kappa: float
    epsilon: float
    distance_over_compton: float | None = None

    @property
    def kappa_ratio(self) -> float:
        return self.kappa / self.omega_c

    @property
    def epsilon_ratio(self) -> float:
        return self.epsilon / self.omega_c

    @property
    def shifted_frequency(self) -> float:
        return self.omega_c + self.kappa + self.epsilon

    def to_json(self) -> dict[str, float | None]:
        data = asdict(self)
        data["kappa_ratio"] = self.kappa_ratio
        data["epsilon_ratio"] = self.epsilon_ratio
        return data


def frequency_shift(
    phi_g: float,
    phi_e: float,
    k: PhysicalConstants,
    distance: float | None = None,
) -> FrequencyShift:
    """kappa = omega_c Phi_g / c^2 and epsilon = omega_c (e / mc^2) Phi_e.

    Potentials are per unit mass and per unit charge at the particle. When
    `distance` is given its ratio to the Compton length is recorded; the
    point-like treatment assumes it is large.
    """
    omega_c = k.compton_freq
    c2 = k.light_speed**2
    kappa = omega_c * phi_g / c2
    epsilon = omega_c * (abs(k.charge) / (k.mass * c2)) * phi_e
    ratio = None if distance is None else abs(distance) / k.compton_length
    return FrequencyShift(omega_c, kappa, epsilon, ratio)


def uniform_field_potential(strength: float, distance: float) -> float:
    """Potential difference across `distance` in a uniform field (g*h or E*d)."""
    return strength * distance
