"""Trajectories driven by b = v + u never enter the node of a stationary state."""

from __future__ import annotations

import numpy as np

from zsmlab.core.experiment import ExperimentConfig, GridConfig, InitialStateConfig, PotentialConfig
from zsmlab.core.field import VectorField
from zsmlab.diffusion.ensemble import sample_ensemble, simulate
from zsmlab.diffusion.estimators import NodeAudit
from zsmlab.experiments.core_experiments import Experiment, ExperimentContext, Metric
from zsmlab.fields.kinematics import kinematic_fields
from zsmlab.fields.phase import polar_decompose
from zsmlab.schrodinger.eigen import central_eigenstate


class NodeAvoidanceExperiment(Experiment):
    name = "stationary-node-avoidance"
    anchor = "Node behaviour: if rho(q, 0) > 0 then rho(q(t), t) > 0 for all times; the particle never hits a nodal point"
    summary = (
        "m = 1 harmonic disk eigenstate: the forward ensemble records no entries into the node at the origin, "
        "while a zero-drift control ensemble does enter it."
    )

    @classmethod
    def defaults(cls) -> ExperimentConfig:
        return ExperimentConfig(
            grid=GridConfig(topology="disk-polar", nodes=[256, 64], radius=5.0, boundaries=["absorbing"]),
            potential=PotentialConfig(kind="harmonic", omega=1.0),
            initial_state=InitialStateConfig(kind="central-eigenstate", params={"m": 1}),
            dt=1e-4,
            steps=1000,
            ensemble_size=10_000,
            seed=7,
            params={"node_floor": 1e-5, "control_dt": 1e-3},
            outputs=["csv"],
        )

    def run(self, ctx: ExperimentContext) -> dict[str, Metric]:
        config = ctx.config
        k = ctx.constants
        grid = config.grid.build()
        pot = config.potential.build(grid, k)
        floor = float(config.param("node_floor", 1e-5))
        m = int(config.initial_state.params.get("m", 1))

        eigen = central_eigenstate(pot.scalar, m, k)
        rho, phase = polar_decompose(eigen.psi, k.hbar, ctx.settings.node_floor)
        drift = kinematic_fields(rho, phase, k, node_floor=ctx.settings.node_floor).forward_drift
        state = sample_ensemble(rho, config.ensemble_size, config.seed)

        audit = NodeAudit(rho, floor)
        simulate(state, drift, config.dt, config.steps, k, threads=ctx.threads, block_size=ctx.settings.particle_block, on_step=audit)
        report = audit.report()

        control = NodeAudit(rho, floor)
        still = VectorField(grid, np.zeros((2, *grid.shape)))
        control_dt = float(config.param("control_dt", 1e-3))
        simulate(state, still, control_dt, config.steps, k, threads=ctx.threads, block_size=ctx.settings.particle_block, on_step=control)
        control_report = control.report()

        ctx.write_json("node_audit.json", {"driven": report.to_json(), "zero_drift": control_report.to_json()})
        ctx.write_table(
            "node_audit.csv",
            ["run", "entries", "samples", "min_relative_density"],
            [[0, report.entries, report.samples, report.min_relative_density],
             [1, control_report.entries, control_report.samples, control_report.min_relative_density]],
        )
        return {
            "driven_entries": Metric.check(report.entries, 0.0),
            "zero_drift_entries": Metric.check(control_report.entries, 1.0, "min"),
            "driven_samples": Metric.check(report.samples, 0.9 * config.ensemble_size * config.steps, "min"),
        }
