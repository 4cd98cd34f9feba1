"""Classical nonlinear Schroedinger packet keeps its width; the linear one spreads."""

from __future__ import annotations

import numpy as np

from zsmlab.core.experiment import ExperimentConfig, GridConfig, InitialStateConfig
from zsmlab.experiments.core_experiments import Experiment, ExperimentContext, Metric
from zsmlab.schrodinger.evolution import evolve_linear, evolve_nonlinear_classical
from zsmlab.schrodinger.states import density_moments, free_gaussian_width, gaussian_packet


class NonlinearClassicalExperiment(Experiment):
    name = "nonlinear-classical-gaussian"
    anchor = "Eq. 43: the nonlinear Schroedinger equation of a classical ensemble; a Gaussian propagates with fixed profile and speed"
    summary = (
        "Translating free Gaussian under the classical nonlinear solver against Crank-Nicolson. Also checks "
        "linear norm conservation and forward-then-backward reversibility."
    )

    @classmethod
    def defaults(cls) -> ExperimentConfig:
        return ExperimentConfig(
            grid=GridConfig(topology="line", nodes=[801], extents=[(-15.0, 25.0)], boundaries=["absorbing"]),
            initial_state=InitialStateConfig(kind="gaussian", params={"sigma": 1.0, "momentum": 2.0, "center": 0.0}),
            dt=2e-3,
            steps=1000,
            tolerances={"width_drift": 0.01, "linear_spread": 0.2, "norm_drift": 1e-8, "reversibility": 1e-6},
            params={"stride": 50},
            outputs=["csv", "binary"],
        )

    def run(self, ctx: ExperimentContext) -> dict[str, Metric]:
        config = ctx.config
        k = ctx.constants
        grid = config.grid.build()
        pot = config.potential.build(grid, k)
        params = config.initial_state.params
        sigma0 = float(params.get("sigma", 1.0))
        momentum = float(params.get("momentum", 2.0))
        center = float(params.get("center", 0.0))
        stride = max(1, int(config.param("stride", 50)))
        t_end = config.dt * config.steps

        psi0 = gaussian_packet(grid, k, center, sigma0, momentum)
        _, width0 = density_moments(grid, psi0.density())
        nonlinear = evolve_nonlinear_classical(psi0, pot, config.dt, config.steps, k, stride=stride)
        linear = evolve_linear(psi0, pot, config.dt, config.steps, k, stride=stride)
        back = evolve_linear(linear.final, pot, -config.dt, config.steps, k, stride=config.steps)

        rows = []
        for t, f_nl, f_lin in zip(nonlinear.times, nonlinear.frames, linear.frames):
            mean_nl, width_nl = density_moments(grid, f_nl.density())
            _, width_lin = density_moments(grid, f_lin.density())
            rows.append([t, mean_nl, width_nl, width_lin, free_gaussian_width(sigma0, t, k)])
        table = np.array(rows)
        width_drift = float(np.max(np.abs(table[:, 2] / width0 - 1.0)))
        spread = float(table[-1, 3] / width0 - 1.0)
        norms = np.asarray(linear.norms)
        norm_drift = float(np.max(np.abs(norms - norms[0])))
        peak = float(np.abs(psi0.values).max())
        return_gap = float(np.abs(back.final.values - psi0.values).max()) / peak
        travelled = float(table[-1, 1] - table[0, 1])
        expected_travel = momentum / k.mass * t_end

        ctx.write_table("widths.csv", ["t", "mean_nonlinear", "width_nonlinear", "width_linear", "width_free_exact"], table)
        ctx.record(linear.write_summary(ctx.path("linear_summary.csv")))
        ctx.record(nonlinear.write_summary(ctx.path("nonlinear_summary.csv")))
        if ctx.wants("binary"):
            ctx.record(nonlinear.write_frames(ctx.path("nonlinear_frames.zsmf")))
        ctx.add_plot(
            "widths.csv", "t",
            {"width_nonlinear": "classical nonlinear", "width_linear": "linear Schroedinger", "width_free_exact": "free spreading"},
            title="Packet width", xlabel="t", ylabel="sigma",
        )
        return {
            "nonlinear_width_drift": Metric.check(width_drift, config.tolerance("width_drift", 0.01)),
            "linear_spread": Metric.check(spread, config.tolerance("linear_spread", 0.2), "min"),
            "nonlinear_travel": Metric.check(travelled, 0.01, "rel", expected_travel),
            "linear_norm_drift": Metric.check(norm_drift, config.tolerance("norm_drift", 1e-8)),
            "reversibility": Metric.check(return_gap, config.tolerance("reversibility", 1e-6)),
        }
