"""zsm command line: list, describe and run the registered experiments."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv
from pydantic import ValidationError

from zsmlab.config import ZsmSettings
from zsmlab.core.errors import ConfigError, UnknownExperimentError
from zsmlab.experiments import experiment_names, get_experiment, run_experiment

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNKNOWN = 2
EXIT_CONFIG = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zsm", description="Stochastic mechanics and zbw numerical experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and write its verdict")
    run.add_argument("name")
    run.add_argument("--config", type=Path, default=None, help="TOML or JSON overrides of the experiment defaults")
    run.add_argument("--out", type=Path, default=None, help="run directory (default: $ZSM_OUT_DIR/<name>)")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--threads", type=int, default=None, help="particle worker threads (default: $ZSM_THREADS)")

    sub.add_parser("list", help="list registered experiments")
    describe = sub.add_parser("describe", help="show what an experiment reproduces")
    describe.add_argument("name")
    return parser


def _format_validation(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        loc = ".".join(str(part) for part in err.get("loc", ())) or "<root>"
        lines.append(f"{loc}: {err.get('msg', 'invalid')}")
    return "\n".join(lines)


def _cmd_list() -> int:
    for name in experiment_names():
        cls = get_experiment(name)
        print(f"{name:32s} {cls.anchor}")
    return EXIT_PASS


def _cmd_describe(name: str) -> int:
    print(get_experiment(name).describe())
    return EXIT_PASS


def _cmd_run(args: argparse.Namespace, settings: ZsmSettings) -> int:
    verdict = run_experiment(
        args.name,
        config_path=args.config,
        out_dir=args.out,
        seed=args.seed,
        threads=args.threads,
        settings=settings,
    )
    for key, metric in sorted(verdict.metrics.items()):
        status = "ok" if metric.passed else "FAIL"
        print(f"  {status:4s} {key}: {metric.value:.6g} ({metric.mode} {metric.tolerance:g})")
    print(f"{verdict.experiment}: {'PASS' if verdict.passed else 'FAIL'} in {verdict.wall_seconds:.2f}s")
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    settings = ZsmSettings.from_env()
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list()
        if args.command == "describe":
            return _cmd_describe(args.name)
        return _cmd_run(args, settings)
    except UnknownExperimentError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_UNKNOWN
    except ValidationError as exc:
        print(f"invalid config:\n{_format_validation(exc)}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
