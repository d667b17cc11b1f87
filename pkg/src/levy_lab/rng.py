"""Seedable, counter-based random streams.

Every stream is a Philox generator keyed by ``SeedSequence(seed, spawn_key=(stream_id,
*path))``. Sub-streams are addressed by index, so work split into blocks can be
generated in any order, or in parallel, and still reproduce the serial result.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import OutOfDomain

DEFAULT_SEED = 20240607
_U64 = 1 << 64


@dataclass(frozen=True)
class RngStream:
    seed: int = DEFAULT_SEED
    stream_id: int = 0
    path: tuple = ()

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= int(value) < _U64:
                raise OutOfDomain(name, f"{name} must be a 64-bit unsigned integer")
        if any(int(k) < 0 for k in self.path):
            raise OutOfDomain("path", "sub-stream indices must be >= 0")

    def spawn(self, index):
        """The independent sub-stream number ``index`` of this stream."""
        return RngStream(self.seed, self.stream_id, self.path + (int(index),))

    def generator(self):
        """A fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id), *self.path))
        return np.random.Generator(np.random.Philox(ss))


def as_generator(rng):
    """Accept an RngStream (pure: always restarts the stream), a numpy Generator
    (consumed in place), or an integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if rng is None:
        return RngStream().generator()
    return RngStream(int(rng)).generator()


def as_stream(rng):
    if isinstance(rng, RngStream):
        return rng
    if rng is None:
        return RngStream()
    if isinstance(rng, np.random.Generator):
        raise TypeError("block-parallel sampling needs an RngStream, not a Generator")
    return RngStream(int(rng))


def thread_count():
    """Worker count from LEVY_LAB_THREADS (default: all cores). Never affects results."""
    value = os.environ.get("LEVY_LAB_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return os.cpu_count() or 1


def map_blocks(func, n_blocks, threads=None):
    """Evaluate ``func(b)`` for b in range(n_blocks), preserving order."""
    threads = thread_count() if threads is None else max(1, int(threads))
    if threads == 1 or n_blocks <= 1:
        return [func(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=min(threads, n_blocks)) as pool:
        return list(pool.map(func, range(n_blocks)))
