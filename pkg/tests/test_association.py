import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hetnet_cumulants.association import (
    AssociationPolicy,
    handover_probability,
    handover_probability_closed_form,
    handover_probability_mc,
)
from hetnet_cumulants.channel import XI
from hetnet_cumulants.errors import InvalidArgumentError
from hetnet_cumulants.lognormal import LogNormalParams
from hetnet_cumulants.specfun import q_function


def test_policy_validation():
    with pytest.raises(InvalidArgumentError):
        AssociationPolicy(-1.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        AssociationPolicy(0.0, 0.0, "sideways")
    p = AssociationPolicy(5.0, 3.0)
    assert p.delta_dB == 2.0
    assert p.standard().delta_dB == -3.0


def test_symmetric_competitors():
    ln = LogNormalParams(-3.0, 1.2)
    assert handover_probability(ln, ln, AssociationPolicy()) == pytest.approx(0.5, abs=1e-12)
    est = handover_probability_mc(ln, ln, AssociationPolicy(), 200_000, np.random.default_rng(0))
    assert abs(est.probability - 0.5) < 3 * est.standard_error


def test_saturation():
    m, p = LogNormalParams(0.0, 1.0), LogNormalParams(0.0, 1.0)
    assert handover_probability(m, p, AssociationPolicy(reb_bias_dB=math.inf)) == 1.0
    assert handover_probability(m, p, AssociationPolicy(reb_bias_dB=300.0)) == pytest.approx(1.0, abs=1e-12)
    assert handover_probability(m, p, AssociationPolicy(hysteresis_dB=300.0)) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(-6, 2), st.floats(0.1, 3), st.floats(-6, 2), st.floats(0.1, 3), st.floats(0, 10), st.floats(0, 6)
)
def test_closed_form_equals_quadrature(mu_m, s_m, mu_p, s_p, reb, hyst):
    m, p = LogNormalParams(mu_m, s_m), LogNormalParams(mu_p, s_p)
    policy = AssociationPolicy(reb, hyst)
    gh = handover_probability(m, p, policy, 32)
    cf = handover_probability_closed_form(m, p, policy)
    assert gh == pytest.approx(cf, abs=1e-6)
    expected = q_function((mu_m - mu_p - policy.delta_dB * XI) / math.hypot(s_m, s_p))
    assert cf == pytest.approx(expected, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(-4, 2), st.floats(0.2, 2.5), st.floats(-4, 2), st.floats(0.2, 2.5), st.floats(0, 10))
def test_quadrature_converged_multiplicative(mu_m, s_m, mu_p, s_p, reb):
    m, p = LogNormalParams(mu_m, s_m), LogNormalParams(mu_p, s_p)
    policy = AssociationPolicy(reb, 3.0)
    assert abs(handover_probability(m, p, policy, 32) - handover_probability(m, p, policy, 64)) <= 1e-8


@pytest.mark.parametrize("reb,hyst", [(0.0, 0.0), (5.0, 3.0), (0.0, 6.0), (10.0, 0.0)])
def test_additive_against_double_integral(reb, hyst):
    from scipy import integrate, stats

    m, p = LogNormalParams(-0.3, 1.7), LogNormalParams(0.2, 0.6)
    policy = AssociationPolicy(reb, hyst, "additive-linear")
    c = policy.offset_mw

    def inner(v):
        level = c + math.exp(v)
        return 0.0 if level <= 0 else stats.norm.cdf(math.log(level), m.mu, m.sigma) * stats.norm.pdf(v, p.mu, p.sigma)

    ref = integrate.quad(inner, p.mu - 12 * p.sigma, p.mu + 12 * p.sigma, epsabs=1e-13, limit=400)[0]
    assert handover_probability(m, p, policy) == pytest.approx(ref, abs=1e-9)


def test_monotonicity():
    m, p = LogNormalParams(-2.0, 1.5), LogNormalParams(-2.5, 1.0)
    probs = [handover_probability(m, p, AssociationPolicy(r, 2.0)) for r in np.linspace(0, 12, 13)]
    assert np.all(np.diff(probs) > 0)
    up = handover_probability(m, LogNormalParams(-2.3, 1.0), AssociationPolicy())
    assert up > handover_probability(m, p, AssociationPolicy())
    down = handover_probability(LogNormalParams(-1.8, 1.5), p, AssociationPolicy())
    assert down < handover_probability(m, p, AssociationPolicy())


def test_multiplicative_bias_is_mu_shift():
    m, p = LogNormalParams(-1.0, 1.1), LogNormalParams(-1.6, 0.9)
    biased = handover_probability_closed_form(m, p, AssociationPolicy(5.0, 0.0))
    shifted = handover_probability_closed_form(m, LogNormalParams(p.mu + 5.0 * XI, p.sigma), AssociationPolicy())
    assert biased == pytest.approx(shifted, abs=1e-15)


def test_closed_form_rejects_additive():
    ln = LogNormalParams(0.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        handover_probability_closed_form(ln, ln, AssociationPolicy(bias_mode="additive-linear"))


@pytest.mark.parametrize("mode", ["multiplicative-linear", "additive-linear"])
def test_quadrature_agrees_with_monte_carlo(mode):
    rng = np.random.default_rng(21)
    for mu_m, s_m, mu_p, s_p, reb, hyst in [
        (0.0, 1.0, -0.5, 0.8, 5.0, 3.0),
        (1.0, 1.8, 0.6, 1.2, 2.0, 0.0),
        (-0.5, 0.5, -0.2, 1.5, 8.0, 4.0),
    ]:
        m, p = LogNormalParams(mu_m, s_m), LogNormalParams(mu_p, s_p)
        policy = AssociationPolicy(reb, hyst, mode)
        est = handover_probability_mc(m, p, policy, 400_000, rng)
        assert abs(est.probability - handover_probability(m, p, policy)) < 3.5 * est.standard_error


def test_mc_needs_enough_samples():
    ln = LogNormalParams(0.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        handover_probability_mc(ln, ln, AssociationPolicy(), 100, np.random.default_rng(0))


def test_rejects_non_lognormal_inputs():
    with pytest.raises(InvalidArgumentError):
        handover_probability((0.0, 1.0), LogNormalParams(0.0, 1.0), AssociationPolicy())
