"""Particle ensembles driven by the forward and backward Nelson SDEs."""

from __future__ import annotations

import json
import logging
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Literal

import numpy as np

from zsmlab.core.constants import PhysicalConstants
from zsmlab.core.errors import InvalidParameterError, SamplingError
from zsmlab.core.field import ScalarField, VectorField, integrate
from zsmlab.core.grid import Grid
from zsmlab.diffusion.interpolation import (
    DriftInterpolator,
    apply_boundaries,
    domain_sample_box,
    interpolate,
)
from zsmlab.diffusion.rng import STREAM_BACKWARD, STREAM_NOISE, STREAM_SAMPLING, CounterStreams

LOG = logging.getLogger("zsmlab.diffusion")

Direction = Literal["forward", "backward"]

DEFAULT_BLOCK = 4096
MIN_ACCEPTANCE = 1e-4


@dataclass(frozen=True, eq=False)
class EnsembleState:
    grid: Grid
    t: float
    positions: np.ndarray
    alive: np.ndarray
    seed: int
    step: int = 0
    increments: np.ndarray | None = None

    @property
    def size(self) -> int:
        return int(self.positions.shape[0])

    @property
    def dim(self) -> int:
        return int(self.positions.shape[1])

    @property
    def absorbed(self) -> int:
        return int(np.count_nonzero(~self.alive))

    def live_positions(self) -> np.ndarray:
        return self.positions[self.alive]


def _inverse_cdf_1d(grid: Grid, rho: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    axis = grid.axes[0]
    x = grid.coords[0]
    if axis.periodic:
        x = np.append(x, axis.stop)
        rho = np.append(rho, rho[0])
    segments = 0.5 * (rho[1:] + rho[:-1]) * np.diff(x)
    cdf = np.concatenate([[0.0], np.cumsum(segments)])
    cdf /= cdf[-1]
    # piecewise-linear density: invert the quadratic CDF on each segment
    idx = np.clip(np.searchsorted(cdf, uniforms, side="right") - 1, 0, len(segments) - 1)
    h = np.diff(x)[idx]
    total = float(np.sum(segments))
    r0 = rho[idx] / total
    r1 = rho[idx + 1] / total
    need = np.maximum(uniforms - cdf[idx], 0.0)
    slope = (r1 - r0) / h
    denom = r0 + np.sqrt(np.maximum(r0**2 + 2.0 * slope * need, 0.0))
    offset = np.divide(2.0 * need, denom, out=np.zeros_like(need), where=denom > 0)
    out = x[idx] + np.clip(offset, 0.0, h)
    if axis.periodic:
        out = axis.start + np.mod(out - axis.start, axis.length)
    return out


def sample_ensemble(rho0: ScalarField, n: int, seed: int) -> EnsembleState:
    """Draw n particles from rho0: inverse CDF in 1-D, rejection sampling in 2-D."""
    grid = rho0.grid
    if n < 1:
        raise InvalidParameterError("N", "ensemble size must be at least 1")
    mass = integrate(grid, rho0.values)
    if abs(mass - 1.0) > 1e-6:
        raise InvalidParameterError("rho0", f"density must be normalized (integral {mass:.6g})")
    rng = CounterStreams(seed).generator(0, 0, STREAM_SAMPLING)
    if grid.ndim == 1:
        positions = _inverse_cdf_1d(grid, rho0.values, rng.random(n))[:, None]
    else:
        positions = _rejection_2d(grid, rho0.values, n, rng)
    return EnsembleState(grid, 0.0, positions, np.ones(n, dtype=bool), seed)


def _rejection_2d(grid: Grid, rho: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    peak = float(rho.max())
    lo, hi = domain_sample_box(grid)
    accepted: list[np.ndarray] = []
    have = 0
    proposed = 0
    batch = max(4 * n, 1024)
    while have < n:
        if grid.is_polar:
            radius = grid.axes[0].stop
            r = radius * np.sqrt(rng.random(batch))
            phi = 2.0 * math.pi * rng.random(batch)
            cand = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
        else:
            cand = lo + (hi - lo) * rng.random((batch, 2))
        dens = interpolate(grid, rho, cand, check=False)
        keep = rng.random(batch) * peak < dens
        proposed += batch
        accepted.append(cand[keep])
        have += int(keep.sum())
        if proposed >= 10 * batch and have / proposed < MIN_ACCEPTANCE:
            raise SamplingError(
                f"rejection acceptance {have / proposed:.2e} below {MIN_ACCEPTANCE:g}; "
                "check the density is resolved by the grid and not concentrated in a few cells"
            )
    return np.concatenate(accepted)[:n]


@dataclass
class WienerStats:
    """Running moments of stored noise increments."""

    dim: int
    count: int = 0
    total: np.ndarray = field(default=None)  # type: ignore[assignment]
    outer: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.total is None:
            self.total = np.zeros(self.dim)
        if self.outer is None:
            self.outer = np.zeros((self.dim, self.dim))

    def add(self, increments: np.ndarray) -> None:
        self.count += increments.shape[0]
        self.total += increments.sum(axis=0)
        self.outer += increments.T @ increments

    def summary(self, variance: float) -> dict[str, float]:
        """z-scores of the sample mean and covariance against 0 and variance*I."""
        if self.count == 0 or variance <= 0:
            return {"count": float(self.count), "mean_z": 0.0, "variance_z": 0.0, "covariance_z": 0.0}
        mean = self.total / self.count
        cov = self.outer / self.count - np.outer(mean, mean)
        mean_z = float(np.max(np.abs(mean)) / math.sqrt(variance / self.count))
        diag_z = float(np.max(np.abs(np.diag(cov) - variance)) / (variance * math.sqrt(2.0 / self.count)))
        off = cov - np.diag(np.diag(cov))
        off_z = float(np.max(np.abs(off)) / (variance / math.sqrt(self.count))) if self.dim > 1 else 0.0
        return {
            "count": float(self.count),
            "mean_z": mean_z,
            "variance_z": diag_z,
            "covariance_z": off_z,
            "variance_ratio": float(np.mean(np.diag(cov)) / variance),
        }


@dataclass
class TrajectoryBundle:
    dt: float
    direction: Direction
    stride: int
    dim: int
    times: list[float] = field(default_factory=list)
    frames: list[np.ndarray] = field(default_factory=list)
    increments: list[np.ndarray] = field(default_factory=list)
    wiener: WienerStats | None = None
    absorbed: int = 0

    def __post_init__(self) -> None:
        if self.wiener is None:
            self.wiener = WienerStats(self.dim)

    @property
    def frame_dt(self) -> float:
        return self.dt * self.stride

    @property
    def size(self) -> int:
        return int(self.frames[0].shape[0]) if self.frames else 0

    def add_frame(self, t: float, positions: np.ndarray) -> None:
        self.times.append(t)
        self.frames.append(positions.copy())


def _step_block(
    state: EnsembleState,
    drift: DriftInterpolator,
    dt: float,
    k: PhysicalConstants,
    direction: Direction,
    streams: CounterStreams,
    block: int,
    block_size: int,
    new_positions: np.ndarray,
    increments: np.ndarray,
) -> None:
    lo = block * block_size
    hi = min(lo + block_size, state.size)
    scale = math.sqrt(2.0 * k.diffusion * dt)
    stream = STREAM_NOISE if direction == "forward" else STREAM_BACKWARD
    noise = streams.normals(state.step, block, (hi - lo, state.dim), scale, stream)
    increments[lo:hi] = noise
    alive = state.alive[lo:hi]
    q = state.positions[lo:hi]
    out = q.copy()
    if alive.any():
        b = drift(q[alive])
        if direction == "forward":
            out[alive] = q[alive] + b * dt + noise[alive]
        else:
            out[alive] = q[alive] - b * dt - noise[alive]
    new_positions[lo:hi] = out


def step_sde(
    state: EnsembleState,
    drift: VectorField,
    dt: float,
    k: PhysicalConstants,
    direction: Direction = "forward",
    streams: CounterStreams | None = None,
    *,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK,
    executor: ThreadPoolExecutor | None = None,
) -> EnsembleState:
    """One Euler-Maruyama step.

    forward:  q(t+dt) = q + b(q) dt + dW
    backward: q(t-dt) = q - b*(q) dt - dW*, with b* supplied as `drift`
    """
    if not dt > 0:
        raise InvalidParameterError("dt", "must be positive")
    state.grid.require_same(drift.grid)
    streams = streams or CounterStreams(state.seed)
    interp = DriftInterpolator(drift)
    new_positions = np.empty_like(state.positions)
    increments = np.zeros_like(state.positions)
    blocks = range(math.ceil(state.size / block_size))

    def run(block: int) -> None:
        _step_block(state, interp, dt, k, direction, streams, block, block_size, new_positions, increments)

    if threads > 1 or executor is not None:
        pool = executor or ThreadPoolExecutor(max_workers=threads)
        try:
            list(pool.map(run, blocks))
        finally:
            if executor is None:
                pool.shutdown()
    else:
        for block in blocks:
            run(block)

    alive = state.alive.copy()
    absorbed = apply_boundaries(state.grid, new_positions, alive)
    alive &= ~absorbed
    if absorbed.any():
        LOG.debug("sde_absorbed=%s", json.dumps({"step": state.step, "count": int(absorbed.sum())}))
    t = state.t + dt if direction == "forward" else state.t - dt
    return replace(state, t=t, positions=new_positions, alive=alive, step=state.step + 1, increments=increments)


DriftSource = VectorField | Callable[[float], VectorField]
StepObserver = Callable[[int, float, EnsembleState], None]


def simulate(
    state: EnsembleState,
    drift: DriftSource,
    dt: float,
    steps: int,
    k: PhysicalConstants,
    direction: Direction = "forward",
    *,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK,
    stride: int = 1,
    keep_increments: bool = False,
    on_step: StepObserver | None = None,
) -> tuple[EnsembleState, TrajectoryBundle]:
    """Run `steps` SDE steps, saving positions every `stride` steps.

    `drift` may be a callable of time, evaluated at the start of each step.
    Noise statistics are accumulated over every step regardless of stride.
    """
    streams = CounterStreams(state.seed)
    bundle = TrajectoryBundle(dt, direction, stride, state.dim)
    bundle.add_frame(state.t, state.positions)
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for step in range(1, steps + 1):
            field_now = drift(state.t) if callable(drift) else drift
            alive_before = state.alive
            state = step_sde(
                state, field_now, dt, k, direction, streams,
                threads=threads, block_size=block_size, executor=executor,
            )
            live_noise = state.increments[alive_before]
            bundle.wiener.add(live_noise)
            if keep_increments:
                bundle.increments.append(state.increments.copy())
            if step % stride == 0:
                bundle.add_frame(state.t, state.positions)
            if on_step is not None:
                on_step(step, state.t, state)
    finally:
        if executor is not None:
            executor.shutdown()
    bundle.absorbed = state.absorbed
    LOG.info(
        "sde_run=%s",
        json.dumps(
            {"steps": steps, "particles": state.size, "absorbed": state.absorbed, "direction": direction},
            ensure_ascii=True,
        ),
    )
    return state, bundle


TRAJECTORY_MAGIC = b"ZSMT"
TRAJECTORY_VERSION = 1
_DIRECTIONS = {"forward": 0, "backward": 1}


def write_bundle(bundle: TrajectoryBundle, path: Path) -> Path:
    """Write `ZSMT | version | direction | dt | N | d | stride` then one chunk per frame.

    Each chunk is `frame index | particle count | time | N*d float64`; absorbed
    particles are NaN rows.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        fh.write(TRAJECTORY_MAGIC)
        fh.write(struct.pack("<BBdIII", TRAJECTORY_VERSION, _DIRECTIONS[bundle.direction], bundle.dt, bundle.size, bundle.dim, bundle.stride))
        for index, (t, frame) in enumerate(zip(bundle.times, bundle.frames)):
            fh.write(struct.pack("<IId", index, frame.shape[0], t))
            fh.write(np.ascontiguousarray(frame, dtype="<f8").tobytes())
    return path


def read_bundle(path: Path) -> TrajectoryBundle:
    data = path.read_bytes()
    if data[:4] != TRAJECTORY_MAGIC:
        raise ValueError(f"{path} is not a ZSMT file")
    version, direction_code, dt, n, dim, stride = struct.unpack_from("<BBdIII", data, 4)
    if version != TRAJECTORY_VERSION:
        raise ValueError(f"unsupported ZSMT version {version}")
    direction = {v: k for k, v in _DIRECTIONS.items()}[direction_code]
    bundle = TrajectoryBundle(dt, direction, stride, dim)
    offset = 4 + struct.calcsize("<BBdIII")
    chunk = struct.calcsize("<IId")
    while offset < len(data):
        _, count, t = struct.unpack_from("<IId", data, offset)
        offset += chunk
        frame = np.frombuffer(data, dtype="<f8", count=count * dim, offset=offset).reshape(count, dim)
        offset += count * dim * 8
        bundle.add_frame(t, frame)
    bundle.absorbed = int(np.count_nonzero(np.isnan(bundle.frames[-1][:, 0]))) if bundle.frames else 0
    return bundle
