"""The quantization gate: every closed-loop change of S must be n*h."""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.field import VectorField
from zsmlab.fields.phase import PhaseField
from zsmlab.fields.winding import WindingReport, circulation, enclosing_loops, non_contractible_loops

LOG = logging.getLogger("zsmlab.hjm")

DEFAULT_GATE_TOL = 1e-6

Loop = Sequence[Sequence[int]]


@dataclass(frozen=True)
class GateVerdict:
    reports: tuple[WindingReport, ...]
    tolerance: float
    regions: int = 1
    notes: tuple[str, ...] = field(default=())

    @property
    def accepted(self) -> bool:
        return all(r.accepted for r in self.reports)

    @property
    def verdict(self) -> str:
        return "ACCEPT" if self.accepted else "REJECT"

    @property
    def windings(self) -> list[int]:
        return [r.n for r in self.reports]

    def to_json(self) -> dict[str, object]:
        return {
            "verdict": self.verdict,
            "windings": self.windings,
            "loops": [
                {"label": r.label, "circulation": r.circulation, "n": r.n, "residual": r.residual, "accepted": r.accepted}
                for r in self.reports
            ],
            "tolerance": self.tolerance,
            "regions": self.regions,
        }


def gate_loops(phase: PhaseField, loops: Sequence[tuple[str, Loop]] | None = None) -> list[tuple[str, Loop]]:
    """Automatic loops (around each interior masked region and around each
    non-contractible cycle) followed by any user loops."""
    grid = phase.grid
    chosen: list[tuple[str, Loop]] = []
    chosen += enclosing_loops(grid, phase.mask)
    chosen += non_contractible_loops(grid, phase.mask)
    chosen += list(loops or [])
    return chosen


def quantization_gate(
    phase: PhaseField,
    k: PhysicalConstants,
    loops: Sequence[tuple[str, Loop]] | None = None,
    tol: float = DEFAULT_GATE_TOL,
    vector_potential: VectorField | None = None,
) -> GateVerdict:
    """ACCEPT iff every loop circulation lies within tol*h of a multiple of h."""
    reports: list[WindingReport] = []
    notes: list[str] = []
    regions = 1 if phase.regions is None else max(int(phase.regions.max()) + 1, 1)
    for label, loop in gate_loops(phase, loops):
        if phase.regions is not None and phase.disconnected:
            region = int(phase.regions[tuple(loop[0])])
            label = f"{label}@region-{region}"
        reports.append(circulation(phase, loop, k, vector_potential, tol=tol, label=label))
    if not reports:
        notes.append("no closed loops on this topology")
    verdict = GateVerdict(tuple(reports), tol * phase.planck, regions, tuple(notes))
    LOG.info("quantization_gate=%s", json.dumps(verdict.to_json(), ensure_ascii=True))
    return verdict
