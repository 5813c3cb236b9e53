"""Deterministic counter-based random streams.

Each simulation replicate (or chunk of replicates) owns a Philox stream keyed
by ``(seed, stream_id)``.  Results are therefore identical regardless of how
replicates are distributed over workers or in what order they execute.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed % 2**64, self.stream_id % 2**64],
                       dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def rng_substream(seed: int, stream_id: int) -> RngStream:
    return RngStream(seed=seed, stream_id=stream_id)


def substream_generators(seed: int, start: int, count: int) -> list[np.random.Generator]:
    return [RngStream(seed, start + i).generator() for i in range(count)]
