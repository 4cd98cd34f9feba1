"""Process-level settings for zsmlab (environment driven)."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[2]


def _get_bool(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() in {"1", "true", "yes", "on"}


def _get_int(name: str, default: int) -> int:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger("zsmlab.config").warning("Ignoring non-integer %s=%r", name, raw)
        return default


def _get_float(name: str, default: float) -> float:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return float(raw)
    except ValueError:
        logging.getLogger("zsmlab.config").warning("Ignoring non-numeric %s=%r", name, raw)
        return default


def _get_str(name: str, default: str = "") -> str:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip() or default


@dataclass(frozen=True)
class ZsmSettings:
    threads: int = 1
    out_dir: str = str(PROJECT_ROOT / "data" / "runs")
    log_level: str = "INFO"
    particle_block: int = 4096
    node_floor: float = 1e-9
    write_binary: bool = True

    @classmethod
    def from_env(cls) -> "ZsmSettings":
        return cls(
            threads=max(1, _get_int("ZSM_THREADS", 1)),
            out_dir=_get_str("ZSM_OUT_DIR", str(PROJECT_ROOT / "data" / "runs")),
            log_level=_get_str("ZSM_LOG_LEVEL", "INFO").upper(),
            particle_block=max(1, _get_int("ZSM_PARTICLE_BLOCK", 4096)),
            node_floor=max(0.0, _get_float("ZSM_NODE_FLOOR", 1e-9)),
            write_binary=_get_bool("ZSM_WRITE_BINARY", True),
        )
