"""Counter-based random streams.

Every block of particles at every step gets its own Philox generator keyed by
the run seed, with (stream, block, step) in the high counter words. Draws only
advance the low word, so streams never overlap and results do not depend on
how blocks are spread over threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

STREAM_NOISE = 1
STREAM_SAMPLING = 2
STREAM_BACKWARD = 3


@dataclass(frozen=True)
class CounterStreams:
    seed: int

    def generator(self, step: int, block: int = 0, stream: int = STREAM_NOISE) -> np.random.Generator:
        counter = np.array([0, stream, block, step], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=self.seed, counter=counter))

    def normals(
        self, step: int, block: int, shape: tuple[int, ...], scale: float, stream: int = STREAM_NOISE
    ) -> np.ndarray:
        return self.generator(step, block, stream).normal(0.0, 1.0, size=shape) * scale
