"""Extraneous central solutions: the HJM residuals pass, the quantization gate decides."""

from __future__ import annotations

import math

import numpy as np

from zsmlab.core.experiment import ExperimentConfig, GridConfig, PotentialConfig
from zsmlab.experiments.core_experiments import Experiment, ExperimentContext, Metric
from zsmlab.hjm.gate import quantization_gate
from zsmlab.hjm.wallstrom import wallstrom_extraneous_solution


class WallstromGateExperiment(Experiment):
    name = "wallstrom-gate"
    anchor = "Eqs. 24-27: v'_a is not quantized for general a; circulation must be an integer multiple of h"
    summary = (
        "a = hbar^2/m gives winding sqrt(3): residuals PASS while the gate REJECTs. "
        "a = 3 hbar^2/2m gives winding 2: both PASS."
    )

    @classmethod
    def defaults(cls) -> ExperimentConfig:
        return ExperimentConfig(
            grid=GridConfig(topology="disk-polar", nodes=[256, 256], radius=8.0, boundaries=["absorbing"]),
            potential=PotentialConfig(kind="harmonic", omega=1.0),
            tolerances={"hj": 1e-6, "gate": 1e-6},
            # a in units of hbar^2/m
            params={"a_extraneous": 1.0, "a_quantized": 1.5},
            outputs=["csv"],
        )

    def run(self, ctx: ExperimentContext) -> dict[str, Metric]:
        config = ctx.config
        k = ctx.constants
        grid = config.grid.build()
        pot = config.potential.build(grid, k)
        hj_tol = config.tolerance("hj", 1e-6)
        gate_tol = config.tolerance("gate", 1e-6)
        unit = k.hbar**2 / k.mass

        metrics: dict[str, Metric] = {}
        rows = []
        profiles = [grid.coords[0]]
        cases = (("extraneous", float(config.param("a_extraneous", 1.0))), ("quantized", float(config.param("a_quantized", 1.5))))
        for label, a_units in cases:
            sol = wallstrom_extraneous_solution(a_units * unit, pot, k, hj_tol)
            gate = quantization_gate(sol.phase, k, tol=gate_tol)
            expected = math.sqrt(2.0 * a_units + 1.0)
            metrics[f"{label}_winding"] = Metric.check(sol.winding, 1e-12, "rel", expected)
            metrics[f"{label}_residuals_pass"] = Metric.flag(sol.residuals.passed)
            metrics[f"{label}_base_residuals_pass"] = Metric.flag(sol.base_residuals.passed)
            metrics[f"{label}_hj_linf"] = Metric.check(sol.residuals.hj_linf, sol.residuals.hj_tol)
            if sol.is_integer:
                metrics[f"{label}_gate_accepts"] = Metric.flag(gate.accepted and bool(gate.reports))
                off = max((abs(n - round(expected)) for n in gate.windings), default=1)
                metrics[f"{label}_gate_n_offset"] = Metric.check(off, 0.0)
            else:
                metrics[f"{label}_gate_rejects"] = Metric.flag(not gate.accepted and bool(gate.reports))
            ctx.write_json(f"{label}_gate.json", {"solution": sol.to_json(), "gate": gate.to_json()})
            rows.append([a_units, sol.winding, sol.energy, sol.residuals.hj_linf, float(gate.accepted)])
            profiles.append(np.sqrt(sol.rho.values[:, 0] * 2.0 * math.pi))

        ctx.write_table("wallstrom.csv", ["a_over_hbar2_m", "winding", "energy", "hj_linf", "gate_accepted"], rows)
        ctx.write_table("radial_profiles.csv", ["r", "R_extraneous", "R_quantized"], np.column_stack(profiles))
        ctx.add_plot(
            "radial_profiles.csv", "r", {"R_extraneous": "a = hbar^2/m", "R_quantized": "a = 3 hbar^2/2m"},
            title="Radial profiles of the central solutions", xlabel="r", ylabel="R(r)",
        )
        return metrics
