"""Single-valuedness of ring superposition densities."""

from __future__ import annotations

from zsmlab.core.experiment import ExperimentConfig, GridConfig
from zsmlab.experiments.core_experiments import Experiment, ExperimentContext, Metric
from zsmlab.hjm.wallstrom import ring_superposition_check

DEFAULT_PAIRS = [[2.0, 1.0], [1.5, 0.0], [1.0, 1.0], [3.0, -2.0], [0.5, 0.25]]


class SuperpositionSingleValueExperiment(Experiment):
    name = "superposition-singlevalue"
    anchor = "Eqs. 28-29: on the unit circle a superposition keeps a single-valued density only when k1 - k2 is an integer"
    summary = "Compares |psi_s|^2 at theta and theta + 2 pi for integer and non-integer wavenumber pairs."

    @classmethod
    def defaults(cls) -> ExperimentConfig:
        return ExperimentConfig(
            grid=GridConfig(topology="ring", nodes=[512], radius=1.0, boundaries=["periodic"]),
            tolerances={"mismatch": 1e-12, "visible_mismatch": 1e-3},
            params={"pairs": DEFAULT_PAIRS},
            outputs=["csv"],
        )

    def run(self, ctx: ExperimentContext) -> dict[str, Metric]:
        config = ctx.config
        mismatch_tol = config.tolerance("mismatch", 1e-12)
        visible = config.tolerance("visible_mismatch", 1e-3)
        metrics: dict[str, Metric] = {}
        rows = []
        agree = True
        for k1, k2 in config.param("pairs", DEFAULT_PAIRS):
            report = ring_superposition_check(
                float(k1), float(k2), nodes=config.grid.nodes[0], radius=config.grid.radius, mismatch_tol=mismatch_tol
            )
            label = f"{k1:g}_{k2:g}"
            if report.expected_single_valued:
                metrics[f"mismatch_{label}"] = Metric.check(report.mismatch, mismatch_tol)
            else:
                metrics[f"mismatch_{label}"] = Metric.check(report.mismatch, visible, "min")
            agree &= report.single_valued == report.expected_single_valued
            rows.append([k1, k2, report.mismatch, float(report.single_valued), float(report.expected_single_valued)])
        metrics["classification_agrees"] = Metric.flag(agree)
        ctx.write_table("superposition.csv", ["k1", "k2", "mismatch", "single_valued", "expected"], rows)
        return metrics
