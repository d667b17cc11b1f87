"""Skeletons of stable and CTS Levy processes on uniform time grids.

Increments are generated in fixed-size blocks, block ``k`` drawing from the
sub-stream ``rng.spawn(k)``. Blocks can therefore be produced in any order or in
parallel threads and the path is bit-for-bit the same.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cts import CtsIncrementConfig, sample_bilateral_increment
from .errors import OutOfDomain, OutOfRange
from .params import CtsTriplet, StableLevyTriplet, levy_to_stable
from .rng import as_stream, map_blocks
from .stable_sampler import increment_transform, sample

#: increments per random sub-stream; part of the reproducibility contract
BLOCK_SIZE = 4096


@dataclass(frozen=True)
class SamplingGrid:
    """Times origin + k * delta for k = 0..n."""

    delta: float
    n: int
    origin: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.delta) and self.delta > 0.0):
            raise OutOfDomain("delta", "grid step must be > 0")
        if int(self.n) != self.n or self.n < 0:
            raise OutOfDomain("n", "number of increments must be an integer >= 0")
        object.__setattr__(self, "n", int(self.n))

    @property
    def horizon(self):
        return self.n * self.delta

    def times(self):
        return self.origin + self.delta * np.arange(self.n + 1)


def compensated_cumsum(increments):
    """Running sums starting at 0, accumulated with Neumaier's compensated summation."""
    inc = np.asarray(increments, dtype=float)
    out = np.empty(inc.size + 1)
    out[0] = 0.0
    total = 0.0
    comp = 0.0
    for k, x in enumerate(inc.tolist(), start=1):
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
        out[k] = total + comp
    return out


@dataclass(frozen=True)
class Path:
    grid: SamplingGrid
    increments: np.ndarray
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        inc = np.array(self.increments, dtype=float)
        if inc.shape != (self.grid.n,):
            raise OutOfDomain("increments", f"expected {self.grid.n} increments, got {inc.shape}")
        values = compensated_cumsum(inc) if self.values is None else np.array(self.values, dtype=float)
        if values.shape != (self.grid.n + 1,) or values[0] != 0.0:
            raise OutOfDomain("values", "values must have n + 1 entries starting at 0")
        inc.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "increments", inc)
        object.__setattr__(self, "values", values)

    def times(self):
        return self.grid.times()


def _blocks(n, draw_block, rng, threads=None):
    stream = as_stream(rng)
    n_blocks = -(-n // BLOCK_SIZE)

    def one(k):
        size = min(BLOCK_SIZE, n - k * BLOCK_SIZE)
        return draw_block(size, stream.spawn(k))

    parts = map_blocks(one, n_blocks, threads)
    return np.concatenate(parts) if parts else np.empty(0)


def stable_increments(t: StableLevyTriplet, delta, n, rng, threads=None):
    """n increments over steps of length ``delta``: unit-time draws, then the time map."""
    p = levy_to_stable(t)
    return _blocks(n, lambda size, s: increment_transform(p, delta, sample(p, s, size=size)),
                   rng, threads)


def simulate_stable_path(t: StableLevyTriplet, grid: SamplingGrid, rng, threads=None) -> Path:
    return Path(grid, stable_increments(t, grid.delta, grid.n, rng, threads))


def cts_increments(t: CtsTriplet, delta, c, n, rng, threads=None, max_rejections=10**8):
    cfg = CtsIncrementConfig(delta, c, max_rejections)
    t = CtsTriplet(t.alpha, t.P, t.A, t.Q, t.B)
    return _blocks(n, lambda size, s: sample_bilateral_increment(t, cfg, s, size=size),
                   rng, threads)


def simulate_cts_path(t: CtsTriplet, grid: SamplingGrid, c, rng, threads=None,
                      max_rejections=10**8) -> Path:
    return Path(grid, cts_increments(t, grid.delta, c, grid.n, rng, threads, max_rejections))


def interpolate(path: Path, t):
    """Linear interpolation of the skeleton at time ``t`` (relative to the grid origin)."""
    g = path.grid
    if not 0.0 <= t <= g.horizon:
        raise OutOfRange(f"t = {t} lies outside [0, {g.horizon}]")
    pos = t / g.delta
    nearest = round(pos)
    if abs(pos - nearest) <= 1e-9 * max(1.0, pos):
        # t is a grid time up to rounding in t / delta
        return float(path.values[nearest])
    k = min(int(math.floor(pos)), g.n)
    frac = pos - k
    if frac == 0.0 or k == g.n:
        return float(path.values[k])
    return float(path.values[k] + frac * (path.values[k + 1] - path.values[k]))


__all__ = [
    "BLOCK_SIZE",
    "Path",
    "SamplingGrid",
    "compensated_cumsum",
    "cts_increments",
    "interpolate",
    "simulate_cts_path",
    "simulate_stable_path",
    "stable_increments",
]
