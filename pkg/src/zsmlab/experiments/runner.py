"""Run one registered experiment into an output directory."""

from __future__ import annotations

import json
import logging
import time
from pathlib import Path

from zsmlab.config import ZsmSettings
from zsmlab.core.experiment import config_hash, merge_config, read_config_tree, save_config
from zsmlab.experiments.core_experiments import ExperimentContext, ExperimentVerdict, get_experiment

LOG = logging.getLogger("zsmlab.experiments")

VERDICT_FILE = "verdict.json"
SCHEMA_FILE = "verdict.schema.json"
PLOTS_FILE = "plots.json"
CONFIG_FILE = "config.json"


def run_experiment(
    name: str,
    *,
    config_path: Path | None = None,
    out_dir: Path | None = None,
    seed: int | None = None,
    threads: int | None = None,
    settings: ZsmSettings | None = None,
) -> ExperimentVerdict:
    """Validate the config, run the pipeline and write the run directory.

    Raises UnknownExperimentError for unregistered names, ConfigError or
    pydantic.ValidationError for bad configs.
    """
    settings = settings or ZsmSettings.from_env()
    cls = get_experiment(name)
    override = read_config_tree(config_path) if config_path is not None else {}
    if seed is not None:
        override = {**override, "seed": seed}
    config = merge_config(cls.defaults(), override)

    out = Path(out_dir) if out_dir is not None else Path(settings.out_dir) / name
    out.mkdir(parents=True, exist_ok=True)
    workers = max(1, threads if threads is not None else settings.threads)
    ctx = ExperimentContext(config=config, out_dir=out, settings=settings, threads=workers)
    ctx.record(save_config(config, out / CONFIG_FILE))

    LOG.info("experiment_start=%s", json.dumps({"name": name, "seed": config.seed, "threads": workers}, ensure_ascii=True))
    started = time.perf_counter()
    metrics = cls().run(ctx)
    elapsed = time.perf_counter() - started

    ctx.write_json(PLOTS_FILE, [plot.model_dump(mode="json") for plot in ctx.plots])
    ctx.write_json(SCHEMA_FILE, ExperimentVerdict.model_json_schema())
    verdict = ExperimentVerdict(
        experiment=name,
        passed=bool(metrics) and all(m.passed for m in metrics.values()),
        metrics=metrics,
        artifacts=[*ctx.artifacts, VERDICT_FILE],
        wall_seconds=elapsed,
        config_hash=config_hash(config),
        seed=config.seed,
    )
    (out / VERDICT_FILE).write_text(verdict.model_dump_json(indent=2) + "\n")
    failed = sorted(key for key, m in metrics.items() if not m.passed)
    LOG.info(
        "verdict=%s",
        json.dumps(
            {"experiment": name, "passed": verdict.passed, "failed": failed, "wall_seconds": round(elapsed, 3)},
            ensure_ascii=True,
        ),
    )
    return verdict
