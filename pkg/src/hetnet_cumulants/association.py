"""Biased cell association: probability that the tagged user hands over to the pico.

Two readings of the biased criterion  Y_P + REB > Y_M + hysteresis  are offered:

* ``"multiplicative-linear"`` (default): the bias is a dB offset, i.e. a gain
  factor on Y_P in linear units. This shifts mu_P by delta * ln(10) / 10.
* ``"additive-linear"``: both knobs are read as dBm power levels and the
  constant c = 10**(REB/10) - 10**(hysteresis/10) mW is added to Y_P.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .channel import XI
from .errors import InvalidArgumentError
from .lognormal import LogNormalParams
from .specfun import DEFAULT_QUADRATURE_ORDER, gauss_hermite, q_function

BIAS_MODES = ("multiplicative-linear", "additive-linear")


@dataclass(frozen=True)
class AssociationPolicy:
    reb_bias_dB: float = 0.0
    hysteresis_dB: float = 0.0
    bias_mode: str = "multiplicative-linear"

    def __post_init__(self):
        if not self.reb_bias_dB >= 0.0 or not self.hysteresis_dB >= 0.0:
            raise InvalidArgumentError("REB bias and hysteresis must be >= 0 dB")
        if math.isnan(self.delta_dB):
            raise InvalidArgumentError("REB bias minus hysteresis is undefined")
        if self.bias_mode not in BIAS_MODES:
            raise InvalidArgumentError(
                f"bias_mode must be one of {BIAS_MODES}, got {self.bias_mode!r}"
            )

    @property
    def delta_dB(self) -> float:
        return self.reb_bias_dB - self.hysteresis_dB

    @property
    def offset_mw(self) -> float:
        """Additive constant c used by the additive-linear reading."""
        return 10.0 ** (self.reb_bias_dB / 10.0) - 10.0 ** (self.hysteresis_dB / 10.0)

    def standard(self) -> "AssociationPolicy":
        """Same policy without range expansion (delta = -hysteresis)."""
        return AssociationPolicy(0.0, self.hysteresis_dB, self.bias_mode)


def _check_ln(*params) -> None:
    for p in params:
        if not isinstance(p, LogNormalParams):
            raise InvalidArgumentError(f"expected LogNormalParams, got {type(p).__name__}")


def _expect(rule, ln: LogNormalParams, g) -> float:
    # E[g(Y)] for Y log-normal, by Gauss-Hermite over the standardised log
    y_log = ln.mu + math.sqrt(2.0) * ln.sigma * rule.nodes
    return float(np.dot(rule.weights, g(y_log)) / math.sqrt(math.pi))


def _upper_tail(x, ln: LogNormalParams):
    """Pr[ln Y > x] for an array of log-levels x (sigma = 0 gives a step)."""
    if ln.sigma == 0.0:
        return (x < ln.mu).astype(float)
    return 0.5 * special.erfc((x - ln.mu) / (math.sqrt(2.0) * ln.sigma))


def handover_probability(
    macro: LogNormalParams,
    pico: LogNormalParams,
    policy: AssociationPolicy,
    order: int = DEFAULT_QUADRATURE_ORDER,
) -> float:
    """Pr[Y_M < Y_P (+) delta] by Gauss-Hermite quadrature.

    In the multiplicative reading the outer expectation runs over the narrower
    log-normal, which keeps the inner tail probability smooth in the quadrature
    variable. The additive reading is integrated adaptively and ignores ``order``.
    """
    _check_ln(macro, pico)
    rule = gauss_hermite(order)
    if policy.bias_mode == "multiplicative-linear":
        delta = policy.delta_dB * XI
        if math.isinf(delta):
            return 1.0 if delta > 0 else 0.0
        if pico.sigma <= macro.sigma:
            # Pr[ln Y_M < ln y_P + delta]
            return _expect(rule, pico, lambda t: 1.0 - _upper_tail(t + delta, macro))
        # Pr[ln Y_P > ln y_M - delta]
        return _expect(rule, macro, lambda t: _upper_tail(t - delta, pico))
    return _additive_probability(macro, pico, policy.offset_mw)


def _additive_probability(macro: LogNormalParams, pico: LogNormalParams, c: float) -> float:
    # Pr[Y_M < c + Y_P]. The integrand has a kink or a steep edge for some
    # parameter ratios, where fixed-order Gauss-Hermite stalls near 1e-3, so the
    # outer expectation over the pico log-level uses adaptive quadrature.
    if pico.sigma == 0.0:
        level = c + math.exp(pico.mu)
        return 0.0 if level <= 0.0 else float(1.0 - _upper_tail(np.array([math.log(level)]), macro)[0])

    def integrand(z):
        total = c + math.exp(pico.mu + pico.sigma * z)
        if total <= 0.0:
            return 0.0
        return float(1.0 - _upper_tail(np.array([math.log(total)]), macro)[0]) * math.exp(-0.5 * z * z)

    breaks = []
    if c < 0.0:
        # the event is impossible below y_P = -c
        breaks.append((math.log(-c) - pico.mu) / pico.sigma)
    val, _ = integrate.quad(integrand, -40.0, 40.0, points=[b for b in breaks if -40 < b < 40] or None,
                            epsabs=1e-13, epsrel=1e-11, limit=400)
    return min(1.0, max(0.0, val / math.sqrt(2.0 * math.pi)))


def handover_probability_closed_form(
    macro: LogNormalParams, pico: LogNormalParams, policy: AssociationPolicy
) -> float:
    """Exact log-normal quotient result for the multiplicative-linear reading."""
    _check_ln(macro, pico)
    if policy.bias_mode != "multiplicative-linear":
        raise InvalidArgumentError("closed form only exists for multiplicative-linear bias")
    spread = math.hypot(macro.sigma, pico.sigma)
    gap = macro.mu - pico.mu - policy.delta_dB * XI
    if spread == 0.0:
        return 1.0 if gap < 0.0 else 0.0
    return q_function(gap / spread)


@dataclass(frozen=True)
class McEstimate:
    probability: float
    standard_error: float
    samples: int


def handover_probability_mc(
    macro: LogNormalParams,
    pico: LogNormalParams,
    policy: AssociationPolicy,
    samples: int,
    rng: np.random.Generator,
) -> McEstimate:
    """Empirical frequency of the association event over independent log-normal pairs."""
    _check_ln(macro, pico)
    if samples < 10_000:
        raise InvalidArgumentError("handover Monte Carlo needs at least 1e4 samples")
    y_m = macro.sample(rng, samples)
    y_p = pico.sample(rng, samples)
    if policy.bias_mode == "multiplicative-linear":
        hit = y_m < y_p * 10.0 ** (policy.delta_dB / 10.0)
    else:
        hit = y_m < y_p + policy.offset_mw
    p = float(hit.mean())
    return McEstimate(p, math.sqrt(max(p * (1.0 - p), 1e-300) / samples), samples)
