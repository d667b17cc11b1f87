"""Classical tempered stable (CTS) laws: exponent, drift, increment samplers and densities.

A CTS Levy process splits as X_t = Y_t^+ - Y_t^-, two independent centered
one-sided tempered stable processes. Each side is sampled by exponential
rejection from a totally skewed stable proposal: exact for alpha < 1 and, for
alpha in (1, 2), an approximation controlled by the truncation constant ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.special import exp1, gamma, gammaincc

from . import stable_density
from .errors import OutOfDomain, QuadratureFailure, RejectionBudgetExceeded, Unsupported
from .params import CtsTriplet, StableParams, is_alpha_one, standardize
from .quadrature import DEFAULT_QUADRATURE
from .rng import as_generator, as_stream
from .stable_sampler import cms_transform, uniform_rows

HALF_PI = 0.5 * math.pi
#: largest batch of proposals generated at once by the rejection samplers
MAX_BATCH = 1 << 20


@dataclass(frozen=True)
class CtsIncrementConfig:
    """Time step, truncation constant and rejection budget of the increment sampler."""

    delta: float
    c: float = 0.0
    max_rejections: int = 10**8

    def __post_init__(self):
        if not (math.isfinite(self.delta) and self.delta > 0.0):
            raise OutOfDomain("delta", "time step must be > 0")
        if not (math.isfinite(self.c) and self.c >= 0.0):
            raise OutOfDomain("c", "truncation constant must be >= 0")
        if self.max_rejections < 1:
            raise OutOfDomain("max_rejections", "max_rejections must be >= 1")


@dataclass(frozen=True)
class FourierDensityConfig:
    """Trapezoid inversion of the characteristic function on [-M, M] with step ``du``;
    M doubles from ``M_init`` until the result moves by less than ``eta`` and the
    characteristic function has decayed below ``tail_eps``."""

    eta: float = 1e-8
    tail_eps: float = 1e-12
    du: float = 0.05
    M_init: float = 8.0
    M_max: float = 1e4

    def __post_init__(self):
        for name in ("eta", "tail_eps", "du", "M_init", "M_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise OutOfDomain(name, f"{name} must be > 0")
        if not self.M_init < self.M_max:
            raise OutOfDomain("M_init", "M_init must be < M_max")


DEFAULT_FOURIER = FourierDensityConfig()


class McEstimate(NamedTuple):
    value: float
    se: float


def _check_sampler_alpha(alpha):
    if not 0.0 < alpha < 2.0:
        raise OutOfDomain("alpha", f"alpha must lie in (0, 1) or (1, 2), got {alpha}")
    if is_alpha_one(alpha):
        raise Unsupported("alpha", "the CTS samplers exclude alpha = 1")


def _sides(t):
    """(mass, tempering, sign) of each side carrying mass."""
    out = []
    if t.P > 0.0:
        out.append((t.P, t.A, 1.0))
    if t.Q > 0.0:
        out.append((t.Q, t.B, -1.0))
    return out


# ----------------------------------------------------------------------------
# characteristic exponent and drift

def side_exponent(alpha, mass, temper, time, u, sign=1.0):
    """log E exp(i u Y) for the centered one-sided part with Levy density
    mass * e^{-temper |x|} |x|^{-1-alpha} on the side ``sign``.

    ``temper = 0`` is accepted for alpha in (1, 2), where it gives the stable limit.
    """
    u = np.asarray(u, dtype=float)
    z = temper - 1j * sign * u
    if is_alpha_one(alpha):
        if temper <= 0.0:
            raise OutOfDomain("A", "alpha = 1 requires a positive tempering rate")
        return time * mass * (z * np.log(z / temper) + 1j * sign * u)
    if temper == 0.0:
        if alpha < 1.0:
            raise OutOfDomain("A", "alpha < 1 requires a positive tempering rate")
        return time * mass * gamma(-alpha) * z**alpha
    return time * mass * gamma(-alpha) * (
        z**alpha - temper**alpha + 1j * sign * u * alpha * temper ** (alpha - 1.0))


def char_exponent(t: CtsTriplet, time, u):
    """log of the characteristic function of X_time (principal branch powers)."""
    t = CtsTriplet(t.alpha, t.P, t.A, t.Q, t.B)
    if not time > 0.0:
        raise OutOfDomain("time", "time must be > 0")
    us = np.asarray(u, dtype=float)
    out = np.zeros(us.shape, dtype=complex)
    for mass, temper, sign in _sides(t):
        out = out + side_exponent(t.alpha, mass, temper, time, us, sign)
    return complex(out) if out.ndim == 0 else out


def upper_incomplete_gamma(s, x):
    """Gamma(s, x) for x > 0 and any real s (recurrence below s = 0)."""
    if not x > 0.0:
        raise OutOfDomain("x", "x must be > 0")
    if s > 0.0:
        return float(gamma(s) * gammaincc(s, x))
    if s == 0.0:
        return float(exp1(x))
    return (upper_incomplete_gamma(s + 1.0, x) - x**s * math.exp(-x)) / s


def drift_b_nu(t: CtsTriplet):
    """b_nu = int_{|x|>1} x nu(dx) = P A^{a-1} Gamma(1-a, A) - Q B^{a-1} Gamma(1-a, B)."""
    t = CtsTriplet(t.alpha, t.P, t.A, t.Q, t.B)
    s = 1.0 - t.alpha
    out = 0.0
    if t.P > 0.0:
        out += t.P * t.A ** (-s) * upper_incomplete_gamma(s, t.A)
    if t.Q > 0.0:
        out -= t.Q * t.B ** (-s) * upper_incomplete_gamma(s, t.B)
    return out


def skewed_stable_scale(alpha, P):
    """sigma of the totally skewed stable law matching the Levy density P x^{-1-alpha}."""
    if not 0.0 < alpha < 2.0:
        raise OutOfDomain("alpha", "alpha must lie in (0, 2)")
    if not P > 0.0:
        raise OutOfDomain("P", "P must be > 0")
    if is_alpha_one(alpha):
        return HALF_PI * P
    return (P * gamma(1.0 - alpha) * math.cos(HALF_PI * alpha) / alpha) ** (1.0 / alpha)


def centering_shift(alpha, P, A, delta):
    """Mean Gamma(1-alpha) delta P A^{alpha-1} removed from the proposal-based draws."""
    return gamma(1.0 - alpha) * delta * P * A ** (alpha - 1.0)


# ----------------------------------------------------------------------------
# samplers

def acceptance_rate_fv(alpha, P, A, delta):
    """Success probability exp(Gamma(-alpha) delta P A^alpha) of the alpha < 1 sampler."""
    if not 0.0 < alpha < 1.0:
        raise OutOfDomain("alpha", "the closed-form acceptance rate needs alpha in (0, 1)")
    if P < 0.0 or A < 0.0 or not delta > 0.0:
        raise OutOfDomain("P", "need P >= 0, A >= 0 and delta > 0")
    return math.exp(gamma(-alpha) * delta * P * A**alpha)


@lru_cache(maxsize=64)
def _negative_branch_bound(alpha):
    """Upper bound of |S| / V^{(alpha-1)/alpha} over the proposals S < 0 of the
    unit-scale S_alpha(1, 1, 0) transform, alpha in (1, 2)."""
    theta = math.atan(math.tan(HALF_PI * alpha)) / alpha
    u = np.linspace(-HALF_PI, -theta, 200_001)[1:-1]
    head = np.abs(np.sin(alpha * (theta + u))) / (math.cos(alpha * theta) * np.cos(u)) ** (1.0 / alpha)
    g = head * np.cos(alpha * theta + (alpha - 1.0) * u) ** ((1.0 - alpha) / alpha)
    return 1.05 * float(g.max())


def _accepts(alpha, scale, A, c_eff, rows):
    """Proposal values and acceptance flags for uniform rows (angle, exponential, accept)."""
    # accept when U <= exp(-A (S + c)), i.e. S <= -c - log(U) / A
    if alpha > 1.0 and c_eff > 0.0:
        # Exact screening on the raw uniforms. Unless the threshold is above -c/2
        # (U > exp(-A c / 2) fails that), acceptance needs S <= -c/2, which in turn
        # needs V >= v_half because |S| <= scale * bound * V^{(alpha-1)/alpha}
        v_half = (0.5 * c_eff / (scale * _negative_branch_bound(alpha))) ** (alpha / (alpha - 1.0))
        live = (rows[:, 2] > math.exp(-0.5 * A * c_eff)) & (rows[:, 1] < -math.expm1(-v_half))
        live = ~live
        idx = np.flatnonzero(live)
        s = np.full(rows.shape[0], np.inf)
        s[idx] = scale * cms_transform(alpha, 1.0, rows[idx, 0], rows[idx, 1])
        ok = np.zeros(rows.shape[0], dtype=bool)
        ok[idx] = s[idx] <= -c_eff - np.log(rows[idx, 2]) / A
        return s, ok
    s = scale * cms_transform(alpha, 1.0, rows[:, 0], rows[:, 1])
    return s, s <= -c_eff - np.log(rows[:, 2]) / A


def _rejection(alpha, scale, A, c_eff, gen, n, max_rejections, rate_guess):
    out = np.empty(n)
    counts = np.empty(n, dtype=np.int64)
    have = 0
    pending = 0  # proposals already rejected for the increment being built
    rate = min(max(rate_guess, 1e-6), 1.0)
    while have < n:
        m = int(min(MAX_BATCH, max(256, 1.1 * (n - have) / rate + 64)))
        s, ok = _accepts(alpha, scale, A, c_eff, uniform_rows(gen, m, width=3))
        idx = np.flatnonzero(ok)
        if idx.size == 0:
            pending += m
            if pending > max_rejections:
                raise RejectionBudgetExceeded(
                    f"more than {max_rejections} rejected proposals for one increment")
            rate = max(rate / 4.0, 1e-9)
            continue
        take = min(idx.size, n - have)
        used = np.diff(np.concatenate([[-1], idx[:take]]))
        used[0] += pending
        if used.max() - 1 > max_rejections:
            raise RejectionBudgetExceeded(
                f"more than {max_rejections} rejected proposals for one increment")
        out[have:have + take] = s[idx[:take]]
        counts[have:have + take] = used
        have += take
        pending = m - 1 - idx[take - 1]
        rate = max(idx.size / m, 1e-9)
    return out, counts


def sample_y_plus(alpha, P, A, cfg: CtsIncrementConfig, rng, size=None, return_counts=False):
    """Centered one-sided CTS increments Y_delta^+ by rejection from a skewed stable law.

    Exact for alpha in (0, 1); for alpha in (1, 2) the draws follow the
    ``cfg.c``-truncated approximation. With ``return_counts`` the number of
    proposals spent on each draw is returned as well.
    """
    _check_sampler_alpha(alpha)
    if not P > 0.0:
        raise OutOfDomain("P", "P must be > 0")
    if not A > 0.0:
        raise OutOfDomain("A", "A must be > 0")
    gen = as_generator(rng)
    n = 1 if size is None else int(np.prod(size))
    scale = cfg.delta ** (1.0 / alpha) * skewed_stable_scale(alpha, P)
    c_eff = cfg.c if alpha > 1.0 else 0.0
    if alpha < 1.0:
        guess = acceptance_rate_fv(alpha, P, A, cfg.delta)
    else:
        guess = 0.5 * math.exp(-A * c_eff)
    s, counts = _rejection(alpha, scale, A, c_eff, gen, n, cfg.max_rejections, guess)
    y = s - centering_shift(alpha, P, A, cfg.delta)
    if size is None:
        y, counts = float(y[0]), int(counts[0])
    else:
        y, counts = y.reshape(size), counts.reshape(size)
    return (y, counts) if return_counts else y


def _side_generators(rng):
    """Independent generators for the positive and negative sides."""
    if isinstance(rng, np.random.Generator):
        return rng, rng
    stream = as_stream(rng)
    return stream.spawn(0).generator(), stream.spawn(1).generator()


def sample_bilateral_increment(t: CtsTriplet, cfg: CtsIncrementConfig, rng, size=None,
                               return_counts=False):
    """X_delta = Y_delta^+ - Y_delta^-; a side without mass contributes exactly 0."""
    t = CtsTriplet(t.alpha, t.P, t.A, t.Q, t.B)
    _check_sampler_alpha(t.alpha)
    n = 1 if size is None else int(np.prod(size))
    gens = _side_generators(rng)
    x = np.zeros(n)
    counts = np.zeros(n, dtype=np.int64)
    for gen, (mass, temper, sign) in zip(gens, ((t.P, t.A, 1.0), (t.Q, t.B, -1.0))):
        if mass > 0.0:
            y, k = sample_y_plus(t.alpha, mass, temper, cfg, gen, size=n, return_counts=True)
            x += sign * y
            counts += k
    if size is None:
        x, counts = float(x[0]), int(counts[0])
    else:
        x, counts = x.reshape(size), counts.reshape(size)
    return (x, counts) if return_counts else x


def expected_iterations_bilateral(t: CtsTriplet, delta):
    """E(N^+ + N^-) for the alpha < 1 sampler, summed over the sides carrying mass."""
    t = CtsTriplet(t.alpha, t.P, t.A, t.Q, t.B)
    if not t.alpha < 1.0:
        raise OutOfDomain("alpha", "closed form only for alpha in (0, 1); "
                          "use acceptance_rate_iv_mc for alpha in (1, 2)")
    return sum(1.0 / acceptance_rate_fv(t.alpha, m, a, delta) for m, a, _ in _sides(t))


def acceptance_rate_iv_mc(alpha, P, A, delta, c, n_mc, rng):
    """Monte-Carlo estimate of E min(1, exp(-A (S + c))) for the alpha in (1, 2) sampler."""
    if not 1.0 < alpha < 2.0:
        raise OutOfDomain("alpha", "alpha must lie in (1, 2)")
    if not (P > 0.0 and A > 0.0 and delta > 0.0 and c >= 0.0):
        raise OutOfDomain("P", "need P > 0, A > 0, delta > 0 and c >= 0")
    if n_mc < 1000:
        raise OutOfDomain("n_mc", "n_mc must be >= 1000")
    gen = as_generator(rng)
    scale = delta ** (1.0 / alpha) * skewed_stable_scale(alpha, P)
    rows = uniform_rows(gen, int(n_mc))
    s = scale * cms_transform(alpha, 1.0, rows[:, 0], rows[:, 1])
    w = np.exp(-A * np.maximum(s + c, 0.0))
    return McEstimate(float(w.mean()), float(w.std(ddof=1) / math.sqrt(w.size)))


# ----------------------------------------------------------------------------
# densities

def small_time_stable_limit(t: CtsTriplet, delta):
    """(law, shift) such that delta^{-1/alpha} (X_delta + shift) is close to ``law``
    for small ``delta``: the strictly stable law of the untempered jumps.

    ``shift`` undoes the centering of each side. For alpha > 1 it vanishes relative
    to the scale delta^{1/alpha} only like delta^{1 - 1/alpha}, so it is kept for
    every alpha.
    """
    t = CtsTriplet(t.alpha, t.P, t.A, t.Q, t.B)
    _check_sampler_alpha(t.alpha)
    a = t.alpha
    sigma_a = sum(skewed_stable_scale(a, m) ** a for m, _, _ in _sides(t))
    law = StableParams(a, sigma_a ** (1.0 / a), (t.P - t.Q) / (t.P + t.Q), 0.0)
    shift = sum(sign * centering_shift(a, mass, temper, delta) for mass, temper, sign in _sides(t))
    return law, shift


def _skewed_link(alpha, P, A, time):
    """Stable law of S_t^+ and the exponential-tilt constants linking it to Y_t^+."""
    if not 0.0 < alpha < 2.0:
        raise OutOfDomain("alpha", "alpha must lie in (0, 2)")
    if not (P > 0.0 and A > 0.0 and time > 0.0):
        raise OutOfDomain("P", "need P > 0, A > 0 and time > 0")
    sigma = skewed_stable_scale(alpha, P)
    if is_alpha_one(alpha):
        law = StableParams(1.0, time * sigma, 1.0, 0.0)
        return law, time * P * A, time * P * (1.0 + math.log(A))
    law = StableParams(alpha, time ** (1.0 / alpha) * sigma, 1.0, 0.0)
    g = gamma(-alpha)
    return law, -(1.0 - alpha) * time * P * g * A**alpha, time * P * alpha * g * A ** (alpha - 1.0)


def pdf_skewed_via_stable(alpha, P, A, time, x, cfg=DEFAULT_QUADRATURE):
    """Density of Y_time^+ as an exponentially tilted, shifted stable density."""
    law, log_k, shift = _skewed_link(alpha, P, A, time)
    x = np.asarray(x, dtype=float)
    f = stable_density.pdf(law, x - shift, cfg)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(f > 0.0, np.exp(-A * x + log_k) * f, 0.0)
    return float(out) if out.ndim == 0 else out


def cdf_skewed_via_stable(alpha, P, A, time, cfg=DEFAULT_QUADRATURE, step=0.02):
    """Vectorized distribution function of Y_time^+, integrated from its density."""
    law, _, shift = _skewed_link(alpha, P, A, time)
    lo_z, hi_z = stable_density.standard_range(law.alpha, 1.0)
    _, to_x = standardize(law)
    lo, hi = to_x(lo_z) + shift, to_x(hi_z) + shift
    centre = shift + to_x(0.0)
    knots = stable_density.sinh_knots(lo, hi, centre, law.sigma, step)
    return stable_density.tabulate_cdf(
        lambda z: pdf_skewed_via_stable(alpha, P, A, time, z, cfg), knots, cfg)


def _skewed_grid(alpha, P, A, time, step=0.02):
    """Knots covering the numerical support of Y_time^+ (as in cdf_skewed_via_stable)."""
    law, _, shift = _skewed_link(alpha, P, A, time)
    lo_z, hi_z = stable_density.standard_range(law.alpha, 1.0)
    _, to_x = standardize(law)
    return stable_density.sinh_knots(to_x(lo_z) + shift, to_x(hi_z) + shift,
                                     shift + to_x(0.0), law.sigma, step)


def cdf_bilateral_via_stable(t: CtsTriplet, time, n_nodes=20_000, cfg=DEFAULT_QUADRATURE):
    """Distribution function of X_time = Y^+ - Y^- built from the one-sided stable links.

    F(x) = int_0^1 F_+(x + q_-(v)) dv with q_- the quantile function of Y^-, evaluated
    by the midpoint rule on ``n_nodes`` points. Unlike Fourier inversion this stays
    accurate when the characteristic function decays slowly (small alpha * time).
    """
    t = CtsTriplet(t.alpha, t.P, t.A, t.Q, t.B)
    if not time > 0.0:
        raise OutOfDomain("time", "time must be > 0")
    if t.Q == 0.0:
        return cdf_skewed_via_stable(t.alpha, t.P, t.A, time, cfg)
    F_minus = cdf_skewed_via_stable(t.alpha, t.Q, t.B, time, cfg)
    if t.P == 0.0:
        return lambda x: 1.0 - F_minus(-np.asarray(x, dtype=float))
    F_plus = cdf_skewed_via_stable(t.alpha, t.P, t.A, time, cfg)
    y = _skewed_grid(t.alpha, t.Q, t.B, time)
    Fy = F_minus(y)
    keep = np.concatenate([[True], np.diff(Fy) > 0.0])
    v = (np.arange(n_nodes) + 0.5) / n_nodes
    q = np.interp(v, Fy[keep], y[keep])

    def evaluate(x):
        xs = np.asarray(x, dtype=float)
        flat = xs.ravel()
        out = np.empty(flat.size)
        step = max(1, 2_000_000 // n_nodes)
        for lo in range(0, flat.size, step):
            out[lo:lo + step] = F_plus(flat[lo:lo + step, None] + q[None, :]).mean(axis=1)
        return float(out[0]) if xs.ndim == 0 else out.reshape(xs.shape)

    return evaluate


def _trapezoid_terms(t, time, x, cfg, kernel):
    """Half-line trapezoid sum of kernel(phi(u), u, x) with M doubling until stable."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    du = cfg.du
    total = 0.5 * kernel(np.array([1.0 + 0j]), np.array([0.0]), x)[:, 0] * du
    done = 0
    M = cfg.M_init
    prev = None
    while True:
        k = np.arange(done + 1, int(round(M / du)) + 1)
        for chunk in np.array_split(k, max(1, k.size * x.size // 2_000_000 + 1)):
            if chunk.size == 0:
                continue
            u = chunk * du
            phi = np.exp(char_exponent(t, time, u))
            total = total + du * kernel(phi, u, x).sum(axis=1)
        done = int(k[-1]) if k.size else done
        tail = abs(np.exp(char_exponent(t, time, done * du)))
        if prev is not None and tail < cfg.tail_eps and np.max(np.abs(total - prev)) < cfg.eta:
            return total
        prev = total.copy()
        if 2.0 * M > cfg.M_max:
            raise QuadratureFailure(
                f"Fourier inversion not stabilized at M = {M:g} (|phi(M)| = {tail:.3g})")
        M *= 2.0


def _shape_like(values, x):
    x = np.asarray(x, dtype=float)
    return float(values[0]) if x.ndim == 0 else values.reshape(x.shape)


def pdf_fourier(t: CtsTriplet, time, x, cfg: FourierDensityConfig = DEFAULT_FOURIER):
    """Density of X_time by trapezoid inversion of its characteristic function.

    Uses the real form (1/pi) int_0^M Re(phi(u) e^{-iux}) du, exact for the
    symmetric integral over [-M, M] because phi(-u) is the conjugate of phi(u).
    """
    t = CtsTriplet(t.alpha, t.P, t.A, t.Q, t.B)

    def kernel(phi, u, xs):
        return (phi[None, :] * np.exp(-1j * np.outer(xs, u))).real

    return _shape_like(_trapezoid_terms(t, time, x, cfg, kernel) / math.pi, x)


def cdf_fourier(t: CtsTriplet, time, x, cfg: FourierDensityConfig = DEFAULT_FOURIER):
    """Distribution function of X_time by Gil-Pelaez inversion,
    F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-iux} phi(u)) / u du (X_time has mean 0)."""
    t = CtsTriplet(t.alpha, t.P, t.A, t.Q, t.B)

    def kernel(phi, u, xs):
        out = np.empty((xs.size, u.size))
        zero = u == 0.0
        # the integrand tends to -x as u -> 0 because the law is centered
        out[:, zero] = -xs[:, None]
        nz = ~zero
        out[:, nz] = (phi[None, nz] * np.exp(-1j * np.outer(xs, u[nz]))).imag / u[nz]
        return out

    return _shape_like(0.5 - _trapezoid_terms(t, time, x, cfg, kernel) / math.pi, x)


def explore_c(alpha, P, A, delta, c_grid, rng, n_mc=10**5, n_ks=10**4,
              fourier: FourierDensityConfig = DEFAULT_FOURIER):
    """Rows (c, Monte-Carlo acceptance rate, its SE, KS distance of draws to the
    Fourier CDF) for each truncation constant in ``c_grid``."""
    from .validation import ks_distance

    if not 1.0 < alpha < 2.0:
        raise OutOfDomain("alpha", "truncation only applies to alpha in (1, 2)")
    stream = as_stream(rng)
    triplet = CtsTriplet(alpha, P, A)
    rows = []
    for k, c in enumerate(c_grid):
        rate = acceptance_rate_iv_mc(alpha, P, A, delta, c, n_mc, stream.spawn(2 * k))
        draws = sample_y_plus(alpha, P, A, CtsIncrementConfig(delta, c), stream.spawn(2 * k + 1),
                              size=n_ks)
        ks = ks_distance(np.sort(draws), lambda z: cdf_fourier(triplet, delta, z, fourier))
        rows.append((float(c), rate.value, rate.se, ks))
    return rows


__all__ = [
    "CtsIncrementConfig",
    "CtsTriplet",
    "FourierDensityConfig",
    "McEstimate",
    "acceptance_rate_fv",
    "acceptance_rate_iv_mc",
    "cdf_bilateral_via_stable",
    "cdf_fourier",
    "cdf_skewed_via_stable",
    "centering_shift",
    "char_exponent",
    "drift_b_nu",
    "expected_iterations_bilateral",
    "explore_c",
    "pdf_fourier",
    "pdf_skewed_via_stable",
    "sample_bilateral_increment",
    "sample_y_plus",
    "side_exponent",
    "skewed_stable_scale",
    "small_time_stable_limit",
    "upper_incomplete_gamma",
]
