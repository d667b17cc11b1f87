"""Parameterizations of stable and tempered stable laws and their closed-form algebra.

Stable laws use the S_alpha(sigma, beta, delta) convention whose characteristic
function is

    exp(-sigma^a |u|^a (1 - i beta sign(u) tan(pi a / 2)) + i delta u)      a != 1
    exp(-sigma |u| (1 + i beta (2/pi) sign(u) log|u|) + i delta u)           a == 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import gamma

from .errors import AlphaMismatch, OutOfDomain

#: half-width of the band around alpha = 1 inside which the alpha = 1 formulas apply
ALPHA_ONE_TOL = 1e-9


def is_alpha_one(alpha):
    return abs(alpha - 1.0) < ALPHA_ONE_TOL


def _finite(name, value):
    if not math.isfinite(value):
        raise OutOfDomain(name, f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class StableParams:
    """The law S_alpha(sigma, beta, delta).

    Construction validates the fields and canonicalizes ``beta`` to 0 when
    ``alpha == 2`` (the Gaussian characteristic function has no skew term).
    """

    alpha: float
    sigma: float = 1.0
    beta: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "sigma", "beta", "delta"):
            value = float(getattr(self, name))
            _finite(name, value)
            object.__setattr__(self, name, value)
        if not 0.0 < self.alpha <= 2.0:
            raise OutOfDomain("alpha", f"alpha must lie in (0, 2], got {self.alpha}")
        if self.sigma < 0.0:
            raise OutOfDomain("sigma", f"sigma must be >= 0, got {self.sigma}")
        if not -1.0 <= self.beta <= 1.0:
            raise OutOfDomain("beta", f"beta must lie in [-1, 1], got {self.beta}")
        if self.alpha == 2.0 and self.beta != 0.0:
            object.__setattr__(self, "beta", 0.0)


@dataclass(frozen=True)
class StableLevyTriplet:
    """Levy triplet (b, 0, nu) of an alpha-stable process, nu(dx) = P x^{-1-a} dx on x > 0
    and Q |x|^{-1-a} dx on x < 0."""

    alpha: float
    P: float
    Q: float
    b: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "P", "Q", "b"):
            value = float(getattr(self, name))
            _finite(name, value)
            object.__setattr__(self, name, value)
        if not 0.0 < self.alpha < 2.0:
            raise OutOfDomain("alpha", f"alpha must lie in (0, 2), got {self.alpha}")
        if self.P < 0.0:
            raise OutOfDomain("P", "P must be >= 0")
        if self.Q < 0.0:
            raise OutOfDomain("Q", "Q must be >= 0")
        if self.P + self.Q <= 0.0:
            raise OutOfDomain("P", "P + Q must be > 0")


@dataclass(frozen=True)
class CtsTriplet:
    """Classical tempered stable Levy measure

        nu(dx)/dx = P e^{-A x} x^{-1-a} 1{x>0} + Q e^{-B|x|} |x|^{-1-a} 1{x<0}.

    alpha = 1 is accepted for density work; the samplers reject it.
    """

    alpha: float
    P: float
    A: float
    Q: float = 0.0
    B: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "P", "A", "Q", "B"):
            value = float(getattr(self, name))
            _finite(name, value)
            object.__setattr__(self, name, value)
        if not 0.0 < self.alpha < 2.0:
            raise OutOfDomain("alpha", f"alpha must lie in (0, 2), got {self.alpha}")
        for name in ("P", "A", "Q", "B"):
            if getattr(self, name) < 0.0:
                raise OutOfDomain(name, f"{name} must be >= 0")
        if self.P + self.Q <= 0.0:
            raise OutOfDomain("P", "P + Q must be > 0")
        if self.A + self.B <= 0.0:
            raise OutOfDomain("A", "A + B must be > 0")
        if self.P > 0.0 and self.A <= 0.0:
            raise OutOfDomain("A", "A must be > 0 when P > 0")
        if self.Q > 0.0 and self.B <= 0.0:
            raise OutOfDomain("B", "B must be > 0 when Q > 0")


@dataclass(frozen=True)
class AffineMap:
    """x -> scale * x + shift."""

    scale: float
    shift: float = 0.0

    def __post_init__(self):
        if not self.scale > 0.0:
            raise OutOfDomain("scale", "scale must be > 0")

    def __call__(self, x):
        return self.scale * x + self.shift


def validate(params):
    """Return the canonical form of ``params`` or raise OutOfDomain."""
    return StableParams(params.alpha, params.sigma, params.beta, params.delta)


def _sine_integral_constant():
    upper, _ = integrate.quad(lambda r: 1.0 / r**2, 1.0, np.inf, weight="sin", wvar=1.0,
                              epsabs=1e-13, limlst=100)

    def inner(r):
        # (sin r - r) / r^2 without cancellation near 0
        if r < 1e-3:
            return -r / 6.0 + r**3 / 120.0
        return (math.sin(r) - r) / (r * r)

    lower, _ = integrate.quad(inner, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13)
    return upper + lower


@lru_cache(maxsize=None)
def alpha_one_drift_constant():
    """c = int_1^inf sin(r)/r^2 dr + int_0^1 (sin(r) - r)/r^2 dr  (equals 1 - Euler gamma)."""
    return _sine_integral_constant()


def levy_to_stable(t):
    """Stable parameters of X_1 for a stable Levy process with triplet ``t``.

    The location carries the triplet drift: delta = delta_formula + b.
    """
    t = StableLevyTriplet(t.alpha, t.P, t.Q, t.b)
    a, P, Q = t.alpha, t.P, t.Q
    mass = P + Q
    beta = (P - Q) / mass
    if is_alpha_one(a):
        sigma = 0.5 * math.pi * mass
        delta = alpha_one_drift_constant() * (P - Q)
    else:
        sigma = (mass / a * gamma(1.0 - a) * math.cos(0.5 * math.pi * a)) ** (1.0 / a)
        delta = (Q - P) / (1.0 - a)
    return StableParams(a, sigma, beta, delta + t.b)


def stable_to_levy(p):
    """Inverse of :func:`levy_to_stable` for alpha in (0, 2), sigma > 0."""
    p = validate(p)
    a = p.alpha
    if a == 2.0 or p.sigma <= 0.0:
        raise OutOfDomain("alpha", "no Levy measure for alpha = 2 or sigma = 0")
    if is_alpha_one(a):
        mass = 2.0 * p.sigma / math.pi
    else:
        mass = p.sigma**a * a / (gamma(1.0 - a) * math.cos(0.5 * math.pi * a))
    P = 0.5 * (1.0 + p.beta) * mass
    Q = 0.5 * (1.0 - p.beta) * mass
    if is_alpha_one(a):
        b = p.delta - alpha_one_drift_constant() * (P - Q)
    else:
        b = p.delta - (Q - P) / (1.0 - a)
    return StableLevyTriplet(a, P, Q, b)


def standardize(p):
    """Split ``p`` into S_alpha(1, beta, 0) and the affine map carrying Z onto X."""
    p = validate(p)
    if p.sigma <= 0.0:
        raise OutOfDomain("sigma", "cannot standardize a degenerate law (sigma = 0)")
    shift = p.delta
    if is_alpha_one(p.alpha):
        shift += 2.0 / math.pi * p.beta * p.sigma * math.log(p.sigma)
    return StableParams(p.alpha, 1.0, p.beta, 0.0), AffineMap(p.sigma, shift)


def scale_shift_law(p, a, b=0.0):
    """Law of a X + b for X ~ p."""
    p = validate(p)
    if a == 0.0:
        raise OutOfDomain("a", "scale factor must be nonzero")
    sign = math.copysign(1.0, a)
    delta = a * p.delta + b
    if is_alpha_one(p.alpha):
        delta -= 2.0 / math.pi * p.beta * p.sigma * a * math.log(abs(a))
    return StableParams(p.alpha, abs(a) * p.sigma, sign * p.beta, delta)


def sum_law(p0, p1):
    """Law of X0 + X1 for independent X0 ~ p0, X1 ~ p1 with a common alpha."""
    p0, p1 = validate(p0), validate(p1)
    if p0.alpha != p1.alpha:
        raise AlphaMismatch(p0.alpha, p1.alpha)
    a = p0.alpha
    w0, w1 = p0.sigma**a, p1.sigma**a
    total = w0 + w1
    beta = (p0.beta * w0 + p1.beta * w1) / total if total > 0.0 else 0.0
    return StableParams(a, total ** (1.0 / a), beta, p0.delta + p1.delta)


def marginal_at_time(p, t):
    """Law of X_t for the stable Levy process with X_1 ~ p."""
    p = validate(p)
    if not t > 0.0:
        raise OutOfDomain("t", "time must be > 0")
    return StableParams(p.alpha, t ** (1.0 / p.alpha) * p.sigma, p.beta, t * p.delta)


def support(p):
    """Closed support of the law as a pair (lower, upper) with infinite ends allowed.

    Totally skewed laws with alpha < 1 live on a half line starting at delta.
    """
    p = validate(p)
    if p.alpha < 1.0 and p.sigma > 0.0:
        if p.beta == 1.0:
            return (p.delta, math.inf)
        if p.beta == -1.0:
            return (-math.inf, p.delta)
    if p.sigma == 0.0:
        return (p.delta, p.delta)
    return (-math.inf, math.inf)


def moment_finite(p, r):
    """Whether E|X|^r is finite."""
    p = validate(p)
    if not r > 0.0:
        raise OutOfDomain("r", "moment order must be > 0")
    return p.alpha == 2.0 or r < p.alpha
