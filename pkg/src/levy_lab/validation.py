"""Goodness-of-fit machinery: KS distances, empirical characteristic functions,
tail slopes and histogram-versus-density comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import EmptyInput, InsufficientTail, OutOfDomain

#: multiplier of the KS thresholds (the asymptotic 99.9% point is about 1.949)
KS_MULTIPLIER = 1.95


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    total: int

    def __post_init__(self):
        if len(self.counts) != len(self.bin_edges) - 1:
            raise OutOfDomain("counts", "need one count per bin")
        if int(np.sum(self.counts)) != self.total:
            raise OutOfDomain("total", "counts must add up to total")

    def density(self, n=None):
        """Counts normalized by ``n`` (default: total) and bin width."""
        n = self.total if n is None else n
        return self.counts / (n * np.diff(self.bin_edges))


def histogram(samples, bins, range_=None):
    counts, edges = np.histogram(np.asarray(samples, dtype=float), bins=bins, range=range_)
    return Histogram(edges, counts, int(counts.sum()))


@dataclass(frozen=True)
class GofReport:
    """``passed`` is True exactly when statistic <= threshold."""

    statistic: float
    n: int
    threshold: float
    passed: bool
    name: str = ""

    def __post_init__(self):
        if self.passed != (self.statistic <= self.threshold):
            raise OutOfDomain("passed", "passed must equal statistic <= threshold")

    def as_dict(self):
        return {"name": self.name, "statistic": self.statistic, "n": self.n,
                "threshold": self.threshold, "pass": self.passed}


def _nonempty(x, name="samples"):
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInput(f"{name} is empty")
    return x


def ks_threshold(n):
    return KS_MULTIPLIER / math.sqrt(n)


def two_sample_threshold(n, m):
    return KS_MULTIPLIER * math.sqrt((n + m) / (n * m))


def ks_distance(samples, cdf):
    """sup_x |F_n(x) - F(x)|, checking both one-sided limits at every sample."""
    x = np.sort(_nonempty(samples))
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    k = np.arange(1, n + 1)
    return float(max(np.max(k / n - f), np.max(f - (k - 1) / n)))


def two_sample_ks(a, b):
    a = np.sort(_nonempty(a, "a"))
    b = np.sort(_nonempty(b, "b"))
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_report(samples, cdf, name=""):
    n = np.size(samples)
    stat = ks_distance(samples, cdf)
    thr = ks_threshold(n)
    return GofReport(stat, n, thr, stat <= thr, name)


def two_sample_report(a, b, name=""):
    stat = two_sample_ks(a, b)
    thr = two_sample_threshold(np.size(a), np.size(b))
    return GofReport(stat, np.size(a) + np.size(b), thr, stat <= thr, name)


class EmpiricalCf(NamedTuple):
    values: np.ndarray
    se_re: np.ndarray
    se_im: np.ndarray


def empirical_cf(samples, u_grid, chunk=1 << 22):
    """Mean of exp(i u X) at each u with per-component Monte-Carlo standard errors."""
    x = _nonempty(samples)
    u = np.atleast_1d(np.asarray(u_grid, dtype=float))
    n = x.size
    s_re = np.zeros(u.size)
    s_im = np.zeros(u.size)
    q_re = np.zeros(u.size)
    q_im = np.zeros(u.size)
    step = max(1, chunk // max(u.size, 1))
    for lo in range(0, n, step):
        ux = np.outer(x[lo:lo + step], u)
        c, s = np.cos(ux), np.sin(ux)
        s_re += c.sum(axis=0)
        s_im += s.sum(axis=0)
        q_re += (c * c).sum(axis=0)
        q_im += (s * s).sum(axis=0)
    m_re, m_im = s_re / n, s_im / n
    denom = max(n - 1, 1)
    var_re = np.maximum(q_re - n * m_re**2, 0.0) / denom
    var_im = np.maximum(q_im - n * m_im**2, 0.0) / denom
    return EmpiricalCf(m_re + 1j * m_im, np.sqrt(var_re / n), np.sqrt(var_im / n))


def tail_slope(samples, q_lo=0.99, q_hi=0.9999, min_points=100):
    """Least-squares slope of log(1 - F_n) against log x over the upper order
    statistics between two quantiles; about -alpha for a power-law tail."""
    if not 0.5 < q_lo < q_hi < 1.0:
        raise OutOfDomain("q_lo", "need 0.5 < q_lo < q_hi < 1")
    x = np.sort(_nonempty(samples))
    n = x.size
    k = np.arange(int(math.ceil(q_lo * n)), int(math.floor(q_hi * n)))
    k = k[(k >= 0) & (k < n)]
    if k.size < min_points:
        raise InsufficientTail(f"only {k.size} order statistics between the quantiles")
    xs = x[k]
    surv = (n - k - 1 + 0.5) / n
    keep = xs > 0.0
    if keep.sum() < min_points:
        raise InsufficientTail("too few positive order statistics in the tail")
    slope, _ = np.polyfit(np.log(xs[keep]), np.log(surv[keep]), 1)
    return float(slope)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def bin_averaged_density(edges, pdf=None, cdf=None):
    """Average of the density over each bin: from the cdf when given, else by
    8-point Gauss-Legendre."""
    edges = np.asarray(edges, dtype=float)
    width = np.diff(edges)
    if cdf is not None:
        f = np.asarray(cdf(edges), dtype=float)
        return np.diff(f) / width
    mid = 0.5 * (edges[:-1] + edges[1:])
    pts = mid[:, None] + 0.5 * width[:, None] * _GL_NODES[None, :]
    vals = np.asarray(pdf(pts.ravel()), dtype=float).reshape(pts.shape)
    return 0.5 * vals @ _GL_WEIGHTS


def hist_vs_density(samples, pdf=None, bins=50, cdf=None, q=0.025):
    """sup over bins of the central region (empirical q to 1 - q quantiles) of
    |histogram density - bin-averaged density|."""
    x = _nonempty(samples)
    if bins < 10:
        raise OutOfDomain("bins", "need at least 10 bins")
    if pdf is None and cdf is None:
        raise OutOfDomain("pdf", "give a pdf or a cdf")
    lo, hi = np.quantile(x, [q, 1.0 - q])
    h = histogram(x, bins, (lo, hi))
    emp = h.density(x.size)
    ref = bin_averaged_density(h.bin_edges, pdf, cdf)
    return float(np.max(np.abs(emp - ref)))


__all__ = [
    "EmpiricalCf",
    "GofReport",
    "Histogram",
    "KS_MULTIPLIER",
    "bin_averaged_density",
    "empirical_cf",
    "hist_vs_density",
    "histogram",
    "ks_distance",
    "ks_report",
    "ks_threshold",
    "tail_slope",
    "two_sample_ks",
    "two_sample_report",
    "two_sample_threshold",
]
