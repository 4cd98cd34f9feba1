"""Equivariance: a forward ensemble driven by b(t) stays distributed as |psi(t)|^2."""

from __future__ import annotations

import math

import numpy as np

from zsmlab.core.experiment import ExperimentConfig, GridConfig, InitialStateConfig
from zsmlab.core.field import ScalarField, VectorField, integrate
from zsmlab.core.grid import Grid
from zsmlab.diffusion.ensemble import EnsembleState, sample_ensemble, simulate, write_bundle
from zsmlab.diffusion.estimators import empirical_density, l1_distance
from zsmlab.experiments.core_experiments import Experiment, ExperimentContext, Metric
from zsmlab.schrodinger.states import free_gaussian_width
from zsmlab.variational.histories import free_gaussian_fields


def gaussian_density(grid: Grid, sigma: float) -> ScalarField:
    x = grid.coords[0]
    values = np.exp(-(x**2) / (2.0 * sigma**2))
    return ScalarField(grid, values / integrate(grid, values))


class EquivarianceExperiment(Experiment):
    name = "equivariance-free-gaussian"
    anchor = "Eqs. 1-3, 5, 11: the forward diffusion with drift b = v + u carries rho = |psi|^2 along in time"
    summary = "Free spreading Gaussian: KDE of the ensemble against |psi(t)|^2, plus Wiener increment statistics."

    @classmethod
    def defaults(cls) -> ExperimentConfig:
        return ExperimentConfig(
            grid=GridConfig(topology="line", nodes=[512], extents=[(-12.0, 12.0)], boundaries=["absorbing"]),
            initial_state=InitialStateConfig(kind="gaussian", params={"sigma": 1.0}),
            dt=1e-3,
            steps=1000,
            ensemble_size=100_000,
            seed=20240601,
            tolerances={"l1": 0.05, "wiener_z": 5.0},
            params={"checkpoints": 4, "frame_stride": 250},
            outputs=["csv", "binary"],
        )

    def run(self, ctx: ExperimentContext) -> dict[str, Metric]:
        config = ctx.config
        k = ctx.constants
        grid = config.grid.build()
        sigma0 = float(config.initial_state.params.get("sigma", 1.0))
        l1_tol = config.tolerance("l1", 0.05)
        z_tol = config.tolerance("wiener_z", 5.0)
        every = max(1, config.steps // max(1, int(config.param("checkpoints", 4))))

        state = sample_ensemble(gaussian_density(grid, sigma0), config.ensemble_size, config.seed)
        checkpoints: list[list[float]] = []

        def drift(t: float) -> VectorField:
            return free_gaussian_fields(grid, k, sigma0, t).forward_drift

        def watch(step: int, t: float, current: EnsembleState) -> None:
            if step % every == 0 or step == config.steps:
                exact = gaussian_density(grid, free_gaussian_width(sigma0, t, k))
                checkpoints.append([t, l1_distance(empirical_density(current, grid), exact)])

        final, bundle = simulate(
            state,
            drift,
            config.dt,
            config.steps,
            k,
            threads=ctx.threads,
            block_size=ctx.settings.particle_block,
            stride=max(1, int(config.param("frame_stride", 250))),
            on_step=watch,
        )

        t_end = config.dt * config.steps
        exact = gaussian_density(grid, free_gaussian_width(sigma0, t_end, k))
        empirical = empirical_density(final, grid)
        l1 = l1_distance(empirical, exact)
        wiener = bundle.wiener.summary(2.0 * k.diffusion * config.dt)

        ctx.write_table("density_final.csv", ["x", "rho_empirical", "rho_exact"], np.column_stack([grid.coords[0], empirical.values, exact.values]))
        ctx.write_table("l1_history.csv", ["t", "l1"], checkpoints or [[0.0, math.nan]])
        ctx.write_json("wiener.json", wiener)
        if ctx.wants("binary"):
            ctx.record(write_bundle(bundle, ctx.path("trajectories.zsmt")))
        ctx.add_plot(
            "density_final.csv", "x", {"rho_empirical": "ensemble KDE", "rho_exact": "|psi(T)|^2"},
            title="Free Gaussian at the final time", xlabel="x", ylabel="density",
        )
        ctx.add_plot("l1_history.csv", "t", {"l1": "L1 distance"}, title="Equivariance over time", xlabel="t", ylabel="L1")

        worst = max((row[1] for row in checkpoints), default=l1)
        return {
            "l1_final": Metric.check(l1, l1_tol),
            "l1_worst_checkpoint": Metric.check(worst, l1_tol),
            "wiener_mean_z": Metric.check(wiener["mean_z"], z_tol),
            "wiener_variance_z": Metric.check(wiener["variance_z"], z_tol),
            "absorbed_fraction": Metric.check(final.absorbed / final.size, 1e-3),
        }
