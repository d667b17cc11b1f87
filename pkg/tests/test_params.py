import math

import numpy as np
import pytest
from scipy.special import gamma

from levy_lab import stable_density
from levy_lab.errors import AlphaMismatch, OutOfDomain
from levy_lab.params import (AffineMap, CtsTriplet, StableLevyTriplet, StableParams,
                             alpha_one_drift_constant, levy_to_stable, marginal_at_time,
                             moment_finite, scale_shift_law, stable_to_levy, standardize,
                             sum_law, support, validate)

EULER_GAMMA = 0.5772156649015329


def test_validate_keeps_canonical_params():
    p = StableParams(1.5, 1.0, 0.0, 0.0)
    assert validate(p) == p


def test_validate_drops_beta_for_gaussian():
    assert validate(StableParams(2.0, 1.0, 0.7, 0.0)) == StableParams(2.0, 1.0, 0.0, 0.0)


@pytest.mark.parametrize("kwargs,field", [
    (dict(alpha=2.5), "alpha"),
    (dict(alpha=0.0), "alpha"),
    (dict(alpha=1.5, sigma=-1.0), "sigma"),
    (dict(alpha=1.5, beta=1.2), "beta"),
    (dict(alpha=1.5, delta=math.nan), "delta"),
])
def test_stable_params_domain(kwargs, field):
    with pytest.raises(OutOfDomain) as exc:
        StableParams(**kwargs)
    assert exc.value.field == field


@pytest.mark.parametrize("kwargs", [
    dict(alpha=2.0, P=1.0, A=1.0),
    dict(alpha=0.5, P=1.0, A=0.0),
    dict(alpha=0.5, P=1.0, A=1.0, Q=1.0, B=0.0),
    dict(alpha=0.5, P=0.0, A=1.0),
])
def test_cts_triplet_domain(kwargs):
    with pytest.raises(OutOfDomain):
        CtsTriplet(**kwargs)


def test_alpha_one_drift_constant_is_one_minus_euler_gamma():
    assert alpha_one_drift_constant() == pytest.approx(1.0 - EULER_GAMMA, abs=1e-12)


@pytest.mark.parametrize("P,Q", [(1.0, 0.0), (0.3, 0.7), (2.0, 2.0)])
def test_levy_to_stable_alpha_one(P, Q):
    p = levy_to_stable(StableLevyTriplet(1.0, P, Q, 0.0))
    assert p.sigma == pytest.approx(0.5 * math.pi * (P + Q), rel=1e-15)
    assert p.beta == pytest.approx((P - Q) / (P + Q), abs=1e-15)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.5, 1.9])
def test_levy_to_stable_symmetric(alpha):
    p = levy_to_stable(StableLevyTriplet(alpha, 0.7, 0.7, 0.0))
    assert p.beta == 0.0 and p.delta == 0.0


def test_levy_to_stable_one_sided_half():
    p = levy_to_stable(StableLevyTriplet(0.5, 1.0, 0.0, 0.0))
    assert p.sigma == pytest.approx((gamma(0.5) * math.cos(math.pi / 4) / 0.5) ** 2, rel=1e-13)
    assert p.sigma == pytest.approx(2 * math.pi, rel=1e-13)
    assert p.beta == 1.0
    assert p.delta == pytest.approx(-2.0, abs=1e-14)


@pytest.mark.parametrize("alpha,P,Q,b", [(0.5, 1.0, 0.0, 0.0), (1.0, 0.4, 0.9, 0.3),
                                         (1.5, 1.7, 0.3, -1.0), (1.9, 0.2, 0.2, 2.0)])
def test_levy_stable_round_trip(alpha, P, Q, b):
    t = stable_to_levy(levy_to_stable(StableLevyTriplet(alpha, P, Q, b)))
    assert (t.P, t.Q, t.b) == pytest.approx((P, Q, b), abs=1e-12)


def test_levy_to_stable_matches_levy_khintchine():
    # characteristic exponent from the Levy measure by quadrature, alpha in (0, 1)
    from scipy import integrate
    alpha, P, Q, u = 0.6, 1.3, 0.4, 0.8
    w = lambda x: x ** (-1 - alpha)
    re = (integrate.quad(lambda x: (math.cos(u * x) - 1) * w(x), 0, 1, limit=200)[0]
          + integrate.quad(w, 1, np.inf, weight="cos", wvar=u)[0]
          - integrate.quad(w, 1, np.inf)[0])
    im = (integrate.quad(lambda x: math.sin(u * x) * w(x), 0, 1, limit=200)[0]
          + integrate.quad(w, 1, np.inf, weight="sin", wvar=u)[0])
    # no compensator: for alpha < 1 the Levy measure integrates |x| near 0
    psi = P * (re + 1j * im) + Q * (re - 1j * im)
    # levy_to_stable absorbs the compensator drift -int_{|x|<=1} x nu(dx) in delta
    comp = (P - Q) / (1 - alpha)
    phi = stable_density.char_fn(levy_to_stable(StableLevyTriplet(alpha, P, Q, 0.0)), u)
    assert phi == pytest.approx(np.exp(psi - 1j * u * comp), abs=1e-7)


def test_standardize():
    z, m = standardize(StableParams(1.5, 2.0, 0.5, 3.0))
    assert z == StableParams(1.5, 1.0, 0.5, 0.0)
    assert m == AffineMap(2.0, 3.0)


@pytest.mark.parametrize("beta", [-1.0, 0.0, 0.6])
def test_standardize_unit_scale_alpha_one(beta):
    assert standardize(StableParams(1.0, 1.0, beta, 0.0))[1] == AffineMap(1.0, 0.0)


def test_standardize_alpha_one_log_shift():
    _, m = standardize(StableParams(1.0, math.e, 1.0, 0.0))
    assert m.shift == pytest.approx(2 / math.pi * math.e, rel=1e-15)


def test_scale_shift_law_examples():
    p = StableParams(1.5, 1.3, 0.4, 0.7)
    assert scale_shift_law(p, 1.0, 0.0) == p
    assert scale_shift_law(p, -1.0, 0.0) == StableParams(1.5, 1.3, -0.4, -0.7)
    q = scale_shift_law(StableParams(1.0, 1.0, 1.0, 0.0), 2.0, 0.0)
    assert q.delta == pytest.approx(-(2 / math.pi) * 2 * math.log(2), rel=1e-15)


@pytest.mark.parametrize("p", [StableParams(1.5, 1.3, 0.4, 0.7), StableParams(1.0, 0.8, -0.6, 0.2),
                               StableParams(0.6, 2.0, 1.0, -1.0)])
@pytest.mark.parametrize("a,b", [(2.5, 1.0), (-0.5, 0.3)])
def test_scale_shift_law_matches_cf(p, a, b):
    u = np.linspace(-3, 3, 13)
    lhs = stable_density.char_fn(p, a * u) * np.exp(1j * u * b)
    rhs = stable_density.char_fn(scale_shift_law(p, a, b), u)
    assert np.allclose(lhs, rhs, atol=1e-13)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_sum_law_identical_symmetric(alpha):
    s = sum_law(StableParams(alpha), StableParams(alpha))
    assert s.sigma == pytest.approx(2 ** (1 / alpha), rel=1e-15)
    assert s.beta == 0.0 and s.delta == 0.0


def test_sum_law_degenerate_summand():
    p0 = StableParams(1.2, 0.9, 0.3, 0.1)
    assert sum_law(p0, StableParams(1.2, 0.0, 0.5, 2.0)) == StableParams(1.2, 0.9, 0.3, 2.1)


@pytest.mark.parametrize("p0,p1", [
    (StableParams(1.5, 1.0, 1.0, 0.0), StableParams(1.5, 1.0, -1.0, 0.0)),
    (StableParams(0.7, 2.0, 0.5, 1.0), StableParams(0.7, 0.5, -0.2, -0.3)),
    (StableParams(1.0, 1.0, 0.5, 0.0), StableParams(1.0, 3.0, -0.5, 0.0)),
])
def test_sum_law_matches_cf_product(p0, p1):
    u = np.linspace(-4, 4, 17)
    s = sum_law(p0, p1)
    prod = stable_density.char_fn(p0, u) * stable_density.char_fn(p1, u)
    assert np.allclose(stable_density.char_fn(s, u), prod, atol=1e-13)
    if p0.beta == -p1.beta and p0.sigma == p1.sigma:
        assert s.beta == 0.0


def test_sum_law_alpha_mismatch():
    with pytest.raises(AlphaMismatch):
        sum_law(StableParams(1.5), StableParams(1.2))


@pytest.mark.parametrize("p,t,sigma", [
    (StableParams(1.3, 0.7, 0.2, 0.4), 1.0, 0.7),
    (StableParams(0.5, 1.0), 4.0, 16.0),
    (StableParams(2.0, 1.0), 2.0, math.sqrt(2.0)),
])
def test_marginal_at_time(p, t, sigma):
    assert marginal_at_time(p, t).sigma == pytest.approx(sigma, rel=1e-15)


@pytest.mark.parametrize("p,expected", [
    (StableParams(0.5, 1.0, 1.0, 0.0), (0.0, math.inf)),
    (StableParams(0.5, 1.0, -1.0, 2.0), (-math.inf, 2.0)),
    (StableParams(1.5, 1.0, 1.0, 0.0), (-math.inf, math.inf)),
    (StableParams(0.5, 1.0, 0.0, 0.0), (-math.inf, math.inf)),
])
def test_support(p, expected):
    assert support(p) == expected


def test_support_edge_matches_density():
    p = StableParams(0.5, 1.0, 1.0, 0.0)
    lo, _ = support(p)
    assert stable_density.pdf(p, lo - 1e-3) == 0.0
    assert stable_density.pdf(p, -2.0) == 0.0
    assert stable_density.pdf(p, lo + 1.0) > 0.0


@pytest.mark.parametrize("alpha,r,expected", [(1.5, 1.0, True), (1.5, 1.5, False),
                                              (2.0, 7.0, True), (0.5, 0.49, True)])
def test_moment_finite(alpha, r, expected):
    assert moment_finite(StableParams(alpha), r) is expected
