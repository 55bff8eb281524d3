import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from hetnet_cumulants.errors import InvalidArgumentError
from hetnet_cumulants.lognormal import (
    CumulantVec,
    LogNormalParams,
    ln_cumulants,
    ln_from_cumulants,
    partial_moment,
    sir_combine,
)


def _quad_partial(mu, sigma, n, lo, hi):
    # integrate in the log domain: y = e^t, y^n f(y) dy = e^{n t} phi((t - mu)/sigma)/sigma dt
    t_lo = mu - 40 * sigma if lo <= 0 else math.log(lo)
    t_hi = mu + 40 * sigma if hi == math.inf else math.log(hi)
    f = lambda t: math.exp(n * t) * stats.norm.pdf(t, mu, sigma)
    peak = mu + n * sigma**2
    pts = [p for p in (peak,) if t_lo < p < t_hi]
    val, _ = integrate.quad(f, t_lo, t_hi, points=pts or None, epsabs=0, epsrel=1e-12, limit=400)
    return val


def test_lognormal_params_validation():
    with pytest.raises(InvalidArgumentError):
        LogNormalParams(0.0, -1.0)
    with pytest.raises(InvalidArgumentError):
        LogNormalParams(float("inf"), 1.0)


def test_lognormal_basic_properties():
    ln = LogNormalParams(0.3, 0.8)
    assert ln.mean == pytest.approx(math.exp(0.3 + 0.32))
    assert ln.median == pytest.approx(math.exp(0.3))
    assert ln.cdf(ln.median) == pytest.approx(0.5)
    assert ln.ppf(0.9) == pytest.approx(stats.lognorm(0.8, scale=math.exp(0.3)).ppf(0.9))
    assert ln.scaled(2.0).mu == pytest.approx(0.3 + math.log(2.0))


def test_ln_from_cumulants_examples():
    p = ln_from_cumulants([1.0, 0.0])
    assert (p.mu, p.sigma) == (0.0, 0.0)
    p = ln_from_cumulants([math.exp(0.5), (math.e - 1) * math.e])
    assert p.mu == pytest.approx(0.0, abs=1e-12)
    assert p.sigma == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("c", [[0.0, 1.0], [-1.0, 1.0], [1.0, -0.1]])
def test_ln_from_cumulants_rejects(c):
    with pytest.raises(InvalidArgumentError):
        ln_from_cumulants(c)


@settings(max_examples=200, deadline=None)
@given(st.floats(-10, 10), st.floats(0.0, 3.0))
def test_ln_fit_round_trip(mu, sigma):
    back = ln_from_cumulants(ln_cumulants(LogNormalParams(mu, sigma), 2))
    assert back.mu == pytest.approx(mu, abs=1e-12)
    assert back.sigma == pytest.approx(sigma, abs=1e-10)


def test_ln_fit_matches_sample_cumulants():
    target = ln_from_cumulants([2.0, 3.0])
    x = target.sample(np.random.default_rng(5), 1_000_000)
    assert x.mean() == pytest.approx(2.0, rel=0.01)
    assert x.var() == pytest.approx(3.0, rel=0.01)


def test_cumulant_vec_ops():
    a = CumulantVec((1.0, 2.0, 3.0, 4.0))
    b = CumulantVec((0.5, 0.5, 0.5, 0.5))
    assert (a + b).values == (1.5, 2.5, 3.5, 4.5)
    assert (a + b).values == (b + a).values
    assert (a + CumulantVec.zeros(4)).values == a.values
    assert a.skewness == pytest.approx(3.0 / 2.0**1.5)
    assert a.excess_kurtosis == pytest.approx(1.0)
    with pytest.raises(InvalidArgumentError):
        a + CumulantVec((1.0, 2.0))


def test_partial_moment_examples():
    ln = LogNormalParams(0.0, 1.0)
    assert partial_moment(ln, 2) == pytest.approx(math.exp(2.0), rel=1e-14)
    assert partial_moment(ln, 1, 2.0, 2.0) == 0.0
    assert partial_moment(ln, 1, 1.0, math.e) == pytest.approx(_quad_partial(0, 1, 1, 1.0, math.e), abs=1e-6)
    with pytest.raises(InvalidArgumentError):
        partial_moment(ln, 1, 3.0, 2.0)


@pytest.mark.parametrize("mu", [-2.0, 0.0, 2.0])
@pytest.mark.parametrize("sigma", [0.5, 1.5, 3.0])
@pytest.mark.parametrize("n", [1.0, 2.0, 3.0, 2.0 / 3.0])
def test_partial_moment_against_quadrature(mu, sigma, n):
    ln = LogNormalParams(mu, sigma)
    a, b = math.exp(mu - 0.7 * sigma), math.exp(mu + 1.1 * sigma)
    for lo, hi in [(0.0, a), (a, b), (b, math.inf)]:
        assert partial_moment(ln, n, lo, hi) == pytest.approx(_quad_partial(mu, sigma, n, lo, hi), rel=1e-8)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(-3, 3),
    st.floats(0.05, 3),
    st.floats(0.2, 4),
    st.floats(-4, 4),
    st.floats(0.0, 4),
)
def test_partial_moment_additivity(mu, sigma, n, z_a, gap):
    ln = LogNormalParams(mu, sigma)
    a = math.exp(mu + sigma * z_a)
    b = a * math.exp(sigma * gap)
    total = partial_moment(ln, n, -math.inf, a) + partial_moment(ln, n, a, b) + partial_moment(ln, n, b, math.inf)
    assert total == pytest.approx(math.exp(n * mu + 0.5 * n**2 * sigma**2), rel=1e-10)


def test_sir_combine_examples():
    s = LogNormalParams(1.0, 0.7)
    q = sir_combine(s, s)
    assert q.mu == 0.0 and q.sigma == pytest.approx(math.sqrt(2) * 0.7)
    q = sir_combine(s, LogNormalParams(0.0, 0.0))
    assert (q.mu, q.sigma) == (s.mu, s.sigma)


def test_sir_combine_sampling_oracle():
    s, i = LogNormalParams(0.4, 0.9), LogNormalParams(-1.2, 1.3)
    rng = np.random.default_rng(9)
    ratio = np.log(s.sample(rng, 1_000_000) / i.sample(rng, 1_000_000))
    q = sir_combine(s, i)
    assert ratio.mean() == pytest.approx(q.mu, rel=0.01)
    assert ratio.std() == pytest.approx(q.sigma, rel=0.01)


@pytest.mark.parametrize("sigma", [0.2, 0.5, 1.8])
def test_ln_cumulants_closed_form_matches_moment_route(sigma):
    ln = LogNormalParams(-0.4, sigma)
    closed = ln_cumulants(ln, 4).as_array()
    via_moments = ln_cumulants(ln, 5).as_array()[:4]
    np.testing.assert_allclose(closed, via_moments, rtol=1e-9)
