import math

import numpy as np
import pytest

from levy_lab import cts
from levy_lab.errors import OutOfDomain, OutOfRange
from levy_lab.params import CtsTriplet, StableLevyTriplet, StableParams, levy_to_stable
from levy_lab.rng import RngStream
from levy_lab.stable_sampler import increment_transform, sample
from levy_lab.trajectory import (BLOCK_SIZE, Path, SamplingGrid, compensated_cumsum,
                                 cts_increments, interpolate, simulate_cts_path,
                                 simulate_stable_path, stable_increments)

SYM = StableLevyTriplet(1.5, 0.5, 0.5, 0.0)
CTS = CtsTriplet(0.5, 1.7, 1.0, 0.3, 1.0)


def test_grid():
    g = SamplingGrid(0.25, 4)
    assert g.horizon == 1.0
    assert np.array_equal(g.times(), [0.0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(OutOfDomain):
        SamplingGrid(0.0, 3)
    with pytest.raises(OutOfDomain):
        SamplingGrid(0.1, -1)


def test_compensated_cumsum():
    inc = np.array([1e16, 1.0, -1e16, 1.0] * 3)
    out = compensated_cumsum(inc)
    assert out[0] == 0.0 and out.size == inc.size + 1
    assert out[-1] == 6.0
    x = np.random.default_rng(0).normal(size=1000)
    assert np.allclose(compensated_cumsum(x)[1:], np.cumsum(x), atol=1e-12)


@pytest.mark.parametrize("simulate,triplet", [
    (lambda g, s: simulate_stable_path(SYM, g, s), SYM),
    (lambda g, s: simulate_cts_path(CTS, g, 1.0, s), CTS),
])
def test_empty_path(simulate, triplet):
    path = simulate(SamplingGrid(0.1, 0), RngStream(1))
    assert np.array_equal(path.values, [0.0])
    assert path.increments.size == 0


def test_path_is_read_only_and_validated():
    path = simulate_stable_path(SYM, SamplingGrid(1.0, 10), RngStream(2))
    with pytest.raises(ValueError):
        path.values[1] = 3.0
    with pytest.raises(OutOfDomain):
        Path(SamplingGrid(1.0, 3), np.zeros(2))
    with pytest.raises(OutOfDomain):
        Path(SamplingGrid(1.0, 2), np.zeros(2), values=[1.0, 1.0, 1.0])


def test_same_seed_same_path():
    g = SamplingGrid(1.0, 1000)
    a = simulate_stable_path(SYM, g, RngStream(42))
    b = simulate_stable_path(SYM, g, RngStream(42))
    c = simulate_stable_path(SYM, g, RngStream(43))
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


@pytest.mark.parametrize("threads", [1, 3, 8])
def test_thread_count_does_not_change_paths(threads):
    n = 3 * BLOCK_SIZE + 17
    ref = stable_increments(SYM, 0.5, n, RngStream(5), threads=1)
    assert np.array_equal(stable_increments(SYM, 0.5, n, RngStream(5), threads=threads), ref)
    ref = cts_increments(CTS, 0.01, 1.0, n, RngStream(6), threads=1)
    assert np.array_equal(cts_increments(CTS, 0.01, 1.0, n, RngStream(6), threads=threads), ref)


def test_block_prefix_stability():
    # the first blocks do not depend on how many increments follow
    a = stable_increments(SYM, 1.0, BLOCK_SIZE, RngStream(7))
    b = stable_increments(SYM, 1.0, 2 * BLOCK_SIZE + 5, RngStream(7))
    assert np.array_equal(a, b[:BLOCK_SIZE])


def test_stable_block_uses_unit_draws():
    s = RngStream(8)
    p = levy_to_stable(SYM)
    inc = stable_increments(SYM, 0.3, 10, s)
    assert np.allclose(inc, increment_transform(p, 0.3, sample(p, s.spawn(0), size=10)), rtol=1e-15)


def test_cts_one_sided_support():
    t = CtsTriplet(0.5, 1.7, 1.0)
    inc = cts_increments(t, 0.1, 0.0, 20_000, RngStream(9))
    assert inc.min() >= -cts.centering_shift(0.5, 1.7, 1.0, 0.1)


@pytest.mark.parametrize("delta,c", [(0.01, 1.0), (0.1, 1.0), (1.0, 10.0)])
def test_paper_cts_parameter_sets_run(delta, c):
    t = CtsTriplet(1.5, 1.7, 1.0, 0.3, 1.0) if delta < 1 else CtsTriplet(0.5, 1.7, 1.0, 0.3, 1.0)
    path = simulate_cts_path(t, SamplingGrid(delta, 1000), c, RngStream(10))
    assert path.values.shape == (1001,) and np.all(np.isfinite(path.values))


def test_interpolate():
    path = Path(SamplingGrid(0.1, 5), np.array([1.0, -2.0, 0.5, 3.0, 1.0]))
    assert interpolate(path, 0.3) == path.values[3]
    assert interpolate(path, 0.25) == pytest.approx(0.5 * (path.values[2] + path.values[3]), rel=1e-14)
    assert interpolate(path, 0.5) == path.values[5]
    assert interpolate(path, 0.0) == 0.0
    for t in (-0.01, 0.51):
        with pytest.raises(OutOfRange):
            interpolate(path, t)


@pytest.mark.parametrize("simulate", [
    lambda g, s: simulate_stable_path(StableLevyTriplet(0.7, 1.0, 0.2, 0.5), g, s),
    lambda g, s: simulate_cts_path(CtsTriplet(1.5, 1.7, 1.0, 0.3, 1.0), g, 2.0, s),
])
def test_values_match_increments(simulate):
    path = simulate(SamplingGrid(0.1, 10_000), RngStream(20))
    diff = np.diff(path.values) - path.increments
    assert np.max(np.abs(diff)) < 1e-12 * np.max(np.abs(path.values))


@pytest.mark.parametrize("simulate", [
    lambda g, s: simulate_stable_path(SYM, g, s),
    lambda g, s: simulate_cts_path(CTS, g, 1.0, s),
])
def test_increments_stationary(simulate):
    from levy_lab.validation import two_sample_ks
    n = 10_000
    inc = simulate(SamplingGrid(0.1, n), RngStream(21)).increments
    assert two_sample_ks(inc[: n // 2], inc[n // 2:]) <= 1.95 * math.sqrt(2 / (n / 2))
