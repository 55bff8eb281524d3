import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hetnet_cumulants.channel import (
    DB_PER_NEPER,
    XI,
    ChannelParams,
    db_to_linear,
    dbm_to_mw,
    ho_ln_equivalent,
    ho_ln_equivalent_db,
    linear_to_db,
    mw_to_dbm,
    path_loss,
    sample_composite_fading,
)
from hetnet_cumulants.errors import InvalidArgumentError, SingularityError
from hetnet_cumulants.montecarlo import EmpiricalDistribution, ks_distance


def test_unit_conversions():
    assert dbm_to_mw(30.0) == pytest.approx(1000.0)
    assert mw_to_dbm(1.0) == pytest.approx(0.0)
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert linear_to_db(100.0) == pytest.approx(20.0)
    assert XI * DB_PER_NEPER == pytest.approx(1.0)


@pytest.mark.parametrize("r,alpha,expected", [(1.0, 3.0, 1.0), (10.0, 3.0, 1e-3), (25.0, 4.0, 2.56e-6)])
def test_path_loss_values(r, alpha, expected):
    assert path_loss(r, alpha) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("r", [0.0, -1.0])
def test_path_loss_rejects_nonpositive(r):
    with pytest.raises(InvalidArgumentError):
        path_loss(r, 3.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 100), st.floats(0.1, 100), st.floats(2.01, 6))
def test_path_loss_multiplicative(a, b, alpha):
    assert path_loss(a * b, alpha) == pytest.approx(path_loss(a, alpha) * path_loss(b, alpha), rel=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [dict(alpha=1.9), dict(alpha=float("nan")), dict(m=0.4), dict(sigma_omega_dB=-1.0), dict(xi_convention="x")],
)
def test_channel_params_validation(kwargs):
    with pytest.raises(InvalidArgumentError):
        ChannelParams(**kwargs)


def test_alpha_two_is_a_singularity():
    with pytest.raises(SingularityError):
        ChannelParams(alpha=2.0)


def test_ho_reduction_large_m_is_pure_shadowing():
    mu_db, sigma_db = ho_ln_equivalent_db(ChannelParams(m=1e6, sigma_omega_dB=8.0, mu_omega_dB=1.5))
    assert mu_db == pytest.approx(1.5, abs=1e-4)
    assert sigma_db == pytest.approx(8.0, abs=1e-3)


def test_ho_reduction_rayleigh():
    mu_db, sigma_db = ho_ln_equivalent_db(ChannelParams(m=1.0, sigma_omega_dB=8.0))
    assert mu_db == pytest.approx(-2.507, abs=1e-3)
    assert sigma_db**2 - 64.0 == pytest.approx(31.02, abs=0.01)


def test_ho_reduction_m16_sigma6_width():
    _, sigma_db = ho_ln_equivalent_db(ChannelParams(m=16.0, sigma_omega_dB=6.0))
    assert 6.0 < sigma_db < 6.5


def test_ho_convention_matches_composite_sampling():
    # fit a log-normal to ln X of exact composite draws; the "ho" scale must match it
    ch = ChannelParams(m=1.0, sigma_omega_dB=8.0)
    x = sample_composite_fading(ch, np.random.default_rng(11), 400_000)
    emp_mu_db, emp_sigma_db = DB_PER_NEPER * np.log(x).mean(), DB_PER_NEPER * np.log(x).std()
    ho_mu, ho_sigma = ho_ln_equivalent_db(ch)
    alt_mu, alt_sigma = ho_ln_equivalent_db(ChannelParams(m=1.0, sigma_omega_dB=8.0, xi_convention="paper"))
    assert abs(emp_mu_db - ho_mu) < 0.05 and abs(emp_sigma_db - ho_sigma) < 0.05
    assert abs(emp_mu_db - alt_mu) > 1.0


def test_ho_sigma_decreases_with_m():
    sig = [ho_ln_equivalent_db(ChannelParams(m=m, sigma_omega_dB=6.0))[1] for m in (0.5, 1, 2, 4, 16, 100)]
    assert np.all(np.diff(sig) < 0)


def test_degenerate_channel_samples_concentrate():
    x = sample_composite_fading(ChannelParams(m=1e6, sigma_omega_dB=0.0), np.random.default_rng(0), 100_000)
    assert x.mean() == pytest.approx(1.0, rel=1e-3)


def test_composite_mean_is_shadowing_mean():
    ch = ChannelParams(m=16, sigma_omega_dB=4.0)
    x = sample_composite_fading(ch, np.random.default_rng(1), 1_000_000)
    assert x.mean() == pytest.approx(ch.shadowing.mean, rel=0.01)


def test_conditional_mean_equals_omega():
    # with sigma = 0 the shadowing is the constant Omega, so E[X] = Omega up to MC error
    ch = ChannelParams(m=2.0, sigma_omega_dB=0.0, mu_omega_dB=3.0)
    x = sample_composite_fading(ch, np.random.default_rng(2), 400_000)
    omega = 10 ** 0.3
    se = omega / math.sqrt(2.0) / math.sqrt(x.size)
    assert abs(x.mean() - omega) < 4 * se


def test_composite_ks_against_ho_lognormal():
    ch = ChannelParams(m=16, sigma_omega_dB=8.0)
    x = sample_composite_fading(ch, np.random.default_rng(3), 100_000)
    assert ks_distance(EmpiricalDistribution(x), ho_ln_equivalent(ch).cdf) <= 0.02
