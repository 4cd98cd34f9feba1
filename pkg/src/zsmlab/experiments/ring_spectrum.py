"""Discrete ring spectrum against E_n = n^2 hbar^2 / 2 m r^2."""

from __future__ import annotations

import numpy as np

from zsmlab.core.experiment import ExperimentConfig, GridConfig
from zsmlab.core.potentials import free
from zsmlab.experiments.core_experiments import Experiment, ExperimentContext, Metric
from zsmlab.fields.phase import polar_decompose
from zsmlab.hjm.residuals import hjm_residuals
from zsmlab.schrodinger.eigen import ring_eigenstate, ring_spectrum


class RingSpectrumExperiment(Experiment):
    name = "ring-spectrum"
    anchor = "Eq. 28: energies of a particle on the unit circle are quantized, E_n = n^2 hbar^2 / 2 m r^2"
    summary = "Dense eigen-solve of the free ring Hamiltonian; degenerate pairs n = 1..5 against the closed form."

    @classmethod
    def defaults(cls) -> ExperimentConfig:
        return ExperimentConfig(
            grid=GridConfig(topology="ring", nodes=[512], radius=1.0, boundaries=["periodic"]),
            tolerances={"relative_energy": 1e-3, "hj_linf": 1e-9},
            params={"n_max": 5, "check_state": 3},
            outputs=["csv"],
        )

    def run(self, ctx: ExperimentContext) -> dict[str, Metric]:
        config = ctx.config
        k = ctx.constants
        grid = config.grid.build()
        radius = config.grid.radius
        n_max = int(config.param("n_max", 5))
        rel_tol = config.tolerance("relative_energy", 1e-3)
        unit = k.hbar**2 / (2.0 * k.mass * radius**2)

        eig = ring_spectrum(grid, k)
        metrics: dict[str, Metric] = {"ground_energy": Metric.check(eig[0], 1e-10 * unit, "abs", 0.0)}
        rows = [[0, 0.0, eig[0], 0.0]]
        worst = 0.0
        for n in range(1, n_max + 1):
            exact = n * n * unit
            pair = eig[2 * n - 1 : 2 * n + 1]
            numeric = float(pair.mean())
            rel = abs(numeric - exact) / exact
            worst = max(worst, rel)
            metrics[f"energy_n{n}"] = Metric.check(numeric, rel_tol, "rel", exact)
            metrics[f"degeneracy_n{n}"] = Metric.check(float(abs(pair[1] - pair[0]) / exact), 1e-9)
            rows.append([n, exact, numeric, rel])
        metrics["max_relative_error"] = Metric.check(worst, rel_tol)

        n_check = int(config.param("check_state", 3))
        state = ring_eigenstate(n_check, radius, k, nodes=grid.shape[0])
        rho, phase = polar_decompose(state.psi, k.hbar, ctx.settings.node_floor)
        report = hjm_residuals(rho, phase, free(state.grid), k, energy=state.energy)
        metrics[f"hj_linf_n{n_check}"] = Metric.check(report.hj_linf / unit, config.tolerance("hj_linf", 1e-9))

        ctx.write_table("spectrum.csv", ["n", "exact", "numeric", "relative_error"], np.array(rows))
        ctx.add_plot(
            "spectrum.csv", "n", {"exact": "n^2 hbar^2/2mr^2", "numeric": "discrete ring"},
            title="Ring spectrum", xlabel="n", ylabel="E",
        )
        return metrics
