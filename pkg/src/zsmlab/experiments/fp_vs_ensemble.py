"""Forward and backward Fokker-Planck evolutions against the analytic density and a particle ensemble."""

from __future__ import annotations

import numpy as np

from zsmlab.core.experiment import ExperimentConfig, GridConfig, InitialStateConfig
from zsmlab.diffusion.ensemble import sample_ensemble, simulate
from zsmlab.diffusion.estimators import empirical_density, l1_distance
from zsmlab.diffusion.fokker_planck import continuity_rhs, fokker_planck_rhs, fokker_planck_step, mass
from zsmlab.experiments.core_experiments import Experiment, ExperimentContext, Metric
from zsmlab.experiments.equivariance import gaussian_density
from zsmlab.fields.kinematics import KinematicFields
from zsmlab.schrodinger.states import free_gaussian_width
from zsmlab.variational.histories import free_gaussian_fields


class FokkerPlanckEnsembleExperiment(Experiment):
    name = "fp-vs-ensemble"
    anchor = "Eqs. 5-8: forward and backward Fokker-Planck equations; their average is the continuity equation"
    summary = (
        "Free Gaussian: implicit forward FP to T against |psi(T)|^2 and the ensemble KDE, backward FP from T "
        "back to rho0, and the forward/backward right-hand-side average against -div(v rho)."
    )

    @classmethod
    def defaults(cls) -> ExperimentConfig:
        return ExperimentConfig(
            grid=GridConfig(topology="line", nodes=[512], extents=[(-12.0, 12.0)], boundaries=["absorbing"]),
            initial_state=InitialStateConfig(kind="gaussian", params={"sigma": 1.0}),
            dt=1e-3,
            steps=1000,
            ensemble_size=50_000,
            seed=11,
            tolerances={"fp_exact_l1": 0.01, "ensemble_l1": 0.05, "backward_l1": 0.01, "average": 1e-10, "mass": 1e-6},
            outputs=["csv"],
        )

    def run(self, ctx: ExperimentContext) -> dict[str, Metric]:
        config = ctx.config
        k = ctx.constants
        grid = config.grid.build()
        sigma0 = float(config.initial_state.params.get("sigma", 1.0))
        dt = config.dt
        t_end = dt * config.steps

        def fields(t: float) -> KinematicFields:
            return free_gaussian_fields(grid, k, sigma0, t)

        rho0 = gaussian_density(grid, sigma0)
        rho = rho0
        average_gap = 0.0
        for step in range(1, config.steps + 1):
            t = step * dt
            rho = fokker_planck_step(rho, fields(t).forward_drift, dt, k, "forward")
            if step % max(1, config.steps // 4) == 0:
                kin = fields(t)
                fwd = fokker_planck_rhs(rho, kin.forward_drift, k, "forward").values
                bwd = fokker_planck_rhs(rho, kin.backward_drift, k, "backward").values
                cont = continuity_rhs(rho, kin.current).values
                scale = max(float(np.abs(cont).max()), np.finfo(float).tiny)
                average_gap = max(average_gap, float(np.abs(0.5 * (fwd + bwd) - cont).max()) / scale)
        rho_fp = rho

        back = rho_fp
        for step in range(config.steps - 1, -1, -1):
            back = fokker_planck_step(back, fields(step * dt).backward_drift, dt, k, "backward")

        exact = gaussian_density(grid, free_gaussian_width(sigma0, t_end, k))
        ensemble = sample_ensemble(rho0, config.ensemble_size, config.seed)
        final, _ = simulate(
            ensemble,
            lambda t: fields(t).forward_drift,
            dt,
            config.steps,
            k,
            threads=ctx.threads,
            block_size=ctx.settings.particle_block,
            stride=config.steps,
        )
        empirical = empirical_density(final, grid)

        ctx.write_table(
            "densities.csv",
            ["x", "rho_fp", "rho_exact", "rho_ensemble", "rho_backward", "rho0"],
            np.column_stack([grid.coords[0], rho_fp.values, exact.values, empirical.values, back.values, rho0.values]),
        )
        ctx.add_plot(
            "densities.csv", "x",
            {"rho_fp": "forward Fokker-Planck", "rho_exact": "|psi(T)|^2", "rho_ensemble": "ensemble KDE"},
            title="Free Gaussian at T", xlabel="x", ylabel="density",
        )
        ctx.add_plot(
            "densities.csv", "x", {"rho_backward": "backward Fokker-Planck", "rho0": "rho(0)"},
            title="Backward evolution to t = 0", xlabel="x", ylabel="density",
        )
        return {
            "fp_exact_l1": Metric.check(l1_distance(rho_fp, exact), config.tolerance("fp_exact_l1", 0.01)),
            "ensemble_fp_l1": Metric.check(l1_distance(empirical, rho_fp), config.tolerance("ensemble_l1", 0.05)),
            "backward_l1": Metric.check(l1_distance(back, rho0), config.tolerance("backward_l1", 0.01)),
            "forward_backward_average_gap": Metric.check(average_gap, config.tolerance("average", 1e-10)),
            "fp_mass_drift": Metric.check(abs(mass(rho_fp) - 1.0), config.tolerance("mass", 1e-6)),
        }
