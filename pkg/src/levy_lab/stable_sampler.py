"""Exact sampling of stable laws (Chambers-Mallows-Stuck) and of stable Levy increments.

All samplers take ``rng`` as an :class:`~levy_lab.rng.RngStream` (pure: the same
stream always yields the same draws), a ``numpy.random.Generator`` (consumed in
place) or an integer seed, and an optional numpy-style ``size``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import OutOfDomain
from .params import StableParams, is_alpha_one, levy_to_stable, standardize, validate
from .rng import as_generator

HALF_PI = 0.5 * math.pi


def _check_alpha_beta(alpha, beta):
    if not 0.0 < alpha < 2.0:
        raise OutOfDomain("alpha", f"alpha must lie in (0, 2), got {alpha}")
    if not -1.0 <= beta <= 1.0:
        raise OutOfDomain("beta", f"beta must lie in [-1, 1], got {beta}")


def _count(size):
    return 1 if size is None else int(np.prod(size))


def _shape(values, size):
    if size is None:
        return float(values[0])
    return values.reshape(size)


def uniform_rows(gen, n, width=2):
    """``n`` rows of uniforms on (0, 1) drawn row-major from ``gen``.

    Rows containing an exact 0 are dropped and replaced by later rows, which is the
    redraw rule for U = -pi/2 (cos U = 0) and for a zero exponential variate. The
    consumed sequence depends only on ``n`` and the generator state.
    """
    rows = gen.random((n, width))
    ok = np.all(rows > 0.0, axis=1)
    if ok.all():
        return rows
    kept = [rows[ok]]
    have = kept[0].shape[0]
    while have < n:
        extra = gen.random((n - have, width))
        extra = extra[np.all(extra > 0.0, axis=1)]
        kept.append(extra)
        have += extra.shape[0]
    return np.concatenate(kept)[:n]


def cms_transform(alpha, beta, u_angle, u_exp):
    """Map uniforms on (0, 1) to S_alpha(1, beta, 0) variates.

    U = pi (u_angle - 1/2) is uniform on (-pi/2, pi/2) and V = -log(1 - u_exp) is
    standard exponential; both are combined by the Chambers-Mallows-Stuck formula.
    """
    U = math.pi * (u_angle - 0.5)
    V = -np.log1p(-u_exp)
    if is_alpha_one(alpha):
        shifted = HALF_PI + beta * U
        return (shifted * np.tan(U) - beta * np.log(HALF_PI * V * np.cos(U) / shifted)) / HALF_PI
    theta = math.atan(beta * math.tan(HALF_PI * alpha)) / alpha
    at = alpha * theta
    head = np.sin(alpha * theta + alpha * U) / (math.cos(at) * np.cos(U)) ** (1.0 / alpha)
    return head * (np.cos(at + (alpha - 1.0) * U) / V) ** ((1.0 - alpha) / alpha)


def sample_standard(alpha, beta, rng, size=None):
    """Draw from S_alpha(1, beta, 0), alpha in (0, 2)."""
    _check_alpha_beta(alpha, beta)
    gen = as_generator(rng)
    rows = uniform_rows(gen, _count(size))
    return _shape(cms_transform(alpha, beta, rows[:, 0], rows[:, 1]), size)


def sample(p, rng, size=None):
    """Draw from S_alpha(sigma, beta, delta); alpha = 2 uses Box-Muller."""
    p = validate(p)
    gen = as_generator(rng)
    n = _count(size)
    if p.sigma == 0.0:
        return _shape(np.full(n, p.delta), size)
    if p.alpha == 2.0:
        rows = gen.random((n, 2))
        radius = np.sqrt(-2.0 * np.log1p(-rows[:, 0]))
        z = radius * np.cos(2.0 * math.pi * rows[:, 1])
        return _shape(p.delta + math.sqrt(2.0) * p.sigma * z, size)
    zp, to_x = standardize(p)
    rows = uniform_rows(gen, n)
    z = cms_transform(zp.alpha, zp.beta, rows[:, 0], rows[:, 1])
    return _shape(to_x(z), size)


def _xlogx(x):
    return 0.0 if x == 0.0 else x * math.log(x)


def sample_from_skewed_pair(alpha, beta, rng, size=None):
    """Draw from S_alpha(1, beta, 0) as a combination of two S_alpha(1, 1, 0) draws."""
    _check_alpha_beta(alpha, beta)
    gen = as_generator(rng)
    n = _count(size)
    y1 = sample_standard(alpha, 1.0, gen, size=n)
    y2 = sample_standard(alpha, 1.0, gen, size=n)
    up, down = 0.5 * (1.0 + beta), 0.5 * (1.0 - beta)
    if is_alpha_one(alpha):
        x = up * y1 - down * y2 + 2.0 / math.pi * (_xlogx(up) - _xlogx(down))
    else:
        x = up ** (1.0 / alpha) * y1 - down ** (1.0 / alpha) * y2
    return _shape(x, size)


def increment_transform(p, delta, y):
    """Turn unit-time draws ``y`` of X_1 ~ p into draws of X_delta."""
    a = p.alpha
    if is_alpha_one(a):
        return delta * y + 2.0 / math.pi * p.beta * p.sigma * delta * math.log(delta)
    scale = delta ** (1.0 / a)
    return scale * y + (delta - scale) * p.delta


def sample_increment(t, delta, rng, size=None):
    """Draw the increment X_delta of the stable Levy process with triplet ``t``."""
    if not delta > 0.0:
        raise OutOfDomain("delta", "time step must be > 0")
    p = levy_to_stable(t)
    y = sample(p, rng, size=_count(size))
    return _shape(increment_transform(p, delta, y), size)


__all__ = [
    "StableParams",
    "cms_transform",
    "increment_transform",
    "sample",
    "sample_from_skewed_pair",
    "sample_increment",
    "sample_standard",
    "uniform_rows",
]
