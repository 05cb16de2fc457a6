"""Deterministic sampling for verification sweeps.

Random checks use a splitmix64 stream so that identical (samples, seed)
configurations produce bit-identical sample sequences everywhere; no
wall-clock seeding is permitted anywhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """splitmix64: output i is mix(seed + i*gamma), counted from 1."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK
        self._count = 0

    def next_u64(self) -> int:
        self._count += 1
        return _mix((self.seed + self._count * _GAMMA) & _MASK)

    def below(self, n: int) -> int:
        return self.next_u64() % n

    def batch(self, count: int) -> np.ndarray:
        """The next `count` outputs as uint64, identical to repeated next_u64."""
        idx = np.arange(self._count + 1, self._count + count + 1, dtype=np.uint64)
        self._count += count
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + idx * np.uint64(_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
            return z ^ (z >> np.uint64(31))

    def batch_below(self, count: int, n: int) -> np.ndarray:
        return (self.batch(count) % np.uint64(n)).astype(np.int64)


@dataclass(frozen=True)
class CheckStrategy:
    """How to sweep a check: every case, or a seeded random sample."""

    mode: str  # "exhaustive" | "random"
    samples: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown strategy mode {self.mode!r}")
        if self.mode == "random" and self.samples < 1:
            raise ValueError("random strategy needs samples >= 1")

    def rng(self) -> SplitMix64:
        return SplitMix64(self.seed)


EXHAUSTIVE = CheckStrategy("exhaustive")


def random_strategy(samples: int, seed: int) -> CheckStrategy:
    return CheckStrategy("random", samples, seed)


# batch size for chunked random sweeps; fixed so sample streams are stable
CHUNK = 1 << 17
