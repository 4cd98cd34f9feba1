"""Gravitational and electric shifts of the zbw rest-frame frequency for a laboratory electron."""

from __future__ import annotations

import math

from zsmlab.core.experiment import ConstantsConfig, ExperimentConfig
from zsmlab.experiments.core_experiments import Experiment, ExperimentContext, Metric
from zsmlab.zbw.shifts import STATVOLT_IN_VOLTS, frequency_shift, uniform_field_potential


class FrequencyShiftExperiment(Experiment):
    name = "frequency-shifts"
    anchor = "Eqs. 45-46: kappa = omega_c Phi_g / c^2 is about 1e-16 omega_c, epsilon = omega_c (e / mc^2) Phi_e about 1e-5 omega_c"
    summary = (
        "SI electron in g = 10 m/s^2 at 1 m and E = 0.03 statvolt/cm at 1 cm. Checks the orders of magnitude, "
        "the additive identity and the vanishing shift at zero potential."
    )

    @classmethod
    def defaults(cls) -> ExperimentConfig:
        return ExperimentConfig(
            constants=ConstantsConfig(unit_system="SI"),
            tolerances={"kappa": 0.1, "order": 0.5, "identity": 1e-12},
            params={
                "gravity": 10.0,
                "gravity_distance": 1.0,
                "electric_statvolt_per_cm": 0.03,
                "electric_distance_cm": 1.0,
                "kappa_expected": 1.1e-16,
            },
            outputs=["csv"],
        )

    def run(self, ctx: ExperimentContext) -> dict[str, Metric]:
        config = ctx.config
        k = ctx.constants
        distance = float(config.param("gravity_distance", 1.0))
        phi_g = uniform_field_potential(float(config.param("gravity", 10.0)), distance)
        # statvolt/cm times cm is statvolt
        phi_e = uniform_field_potential(
            float(config.param("electric_statvolt_per_cm", 0.03)), float(config.param("electric_distance_cm", 1.0))
        ) * STATVOLT_IN_VOLTS

        shift = frequency_shift(phi_g, phi_e, k, distance=distance)
        gravity_only = frequency_shift(phi_g, 0.0, k)
        electric_only = frequency_shift(0.0, phi_e, k)
        rest = frequency_shift(0.0, 0.0, k)

        additive = abs(
            shift.shifted_frequency - (rest.omega_c + gravity_only.kappa + electric_only.epsilon)
        ) / shift.omega_c
        energy_identity = abs(
            k.hbar * shift.shifted_frequency - (k.rest_energy + k.mass * phi_g + abs(k.charge) * phi_e)
        ) / k.rest_energy

        ctx.write_json("shifts.json", {"phi_g": phi_g, "phi_e_volts": phi_e, **shift.to_json()})
        ctx.write_table(
            "shifts.csv",
            ["phi_g", "phi_e", "omega_c", "kappa", "epsilon", "kappa_ratio", "epsilon_ratio"],
            [[phi_g, phi_e, shift.omega_c, shift.kappa, shift.epsilon, shift.kappa_ratio, shift.epsilon_ratio]],
        )
        order = config.tolerance("order", 0.5)
        identity = config.tolerance("identity", 1e-12)
        kappa_expected = float(config.param("kappa_expected", 1.1e-16))
        return {
            "kappa_ratio": Metric.check(shift.kappa_ratio, config.tolerance("kappa", 0.1), "rel", kappa_expected),
            "kappa_order": Metric.check(math.log10(shift.kappa_ratio), order, "abs", -16.0),
            "epsilon_order": Metric.check(math.log10(shift.epsilon_ratio), order, "abs", -5.0),
            "shifts_additive": Metric.check(additive, identity),
            "energy_identity": Metric.check(energy_identity, identity),
            "zero_potential_shift": Metric.check(abs(rest.kappa) + abs(rest.epsilon), 0.0),
            "distance_over_compton": Metric.check(shift.distance_over_compton or 0.0, 1e6, "min"),
        }
