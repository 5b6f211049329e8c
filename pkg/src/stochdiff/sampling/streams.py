"""
Counter-based random streams keyed by (master_seed, level, sample_index)

Each stream owns a Philox generator whose key is derived from the triple
through numpy's SeedSequence, so the variates of one sample never depend on
which other samples were drawn, or in which order.
"""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

# Namespace word mixed into derived seeds so they never collide with sample streams
_DERIVED_SEED_TAG = 0x5EED


class SeedStream:
    """
    Single-owner stream of uniform variates.

    Not thread-safe: every concurrent sample constructs its own stream with
    stream_for().
    """

    def __init__(self, master_seed: int, level: int, sample_index: int) -> None:
        if master_seed < 0 or level < 0 or sample_index < 0:
            raise ValueError(f"Stream keys must be nonnegative, got ({master_seed}, {level}, {sample_index})")
        self.master_seed = int(master_seed)
        self.level = int(level)
        self.sample_index = int(sample_index)
        sequence = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.level, self.sample_index))
        self._generator = np.random.Generator(np.random.Philox(sequence))
        self.draws = 0

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.master_seed, self.level, self.sample_index)

    def uniform(self, a: float, b: float) -> float:
        """Next variate of 𝒰[a, b)"""
        return uniform(self, a, b)

    def random(self, size: int | None = None) -> float | npt.NDArray[np.float64]:
        """Raw 53-bit uniforms on [0, 1)"""
        if size is None:
            self.draws += 1
            return float(self._generator.random())
        self.draws += size
        return self._generator.random(size)

    def __repr__(self) -> str:
        return f"SeedStream(master_seed={self.master_seed}, level={self.level}, sample_index={self.sample_index})"


def stream_for(master_seed: int, level: int, sample_index: int) -> SeedStream:
    """Deterministic stream for the (master_seed, level, sample_index) triple"""
    return SeedStream(master_seed, level, sample_index)


def uniform(stream: SeedStream, a: float, b: float) -> float:
    """
    Draw from 𝒰[a, b) by scaling a 53-bit uniform.

    Raises:
        ValueError: if a >= b
    """
    if not a < b:
        raise ValueError(f"uniform needs a < b, got a={a}, b={b}")
    value = a + (b - a) * float(stream.random())
    # a + (b - a)*x can round up to b
    return value if value < b else math.nextafter(b, a)


def derive_seed(master_seed: int, *indices: int) -> int:
    """64-bit seed for a nested experiment, e.g. (master_seed, L, replicate)"""
    sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=(_DERIVED_SEED_TAG, *indices))
    low, high = sequence.generate_state(2, dtype=np.uint32)
    return int(high) << 32 | int(low)
