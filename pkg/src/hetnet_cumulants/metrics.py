"""SIR distribution, outage probability and average channel capacity."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import XI
from .errors import InvalidArgumentError
from .lognormal import LogNormalParams, sir_combine
from .specfun import DEFAULT_QUADRATURE_ORDER, gauss_hermite, q_function


@dataclass(frozen=True)
class SirDistribution:
    """Log-normal SIR, natural-log parameters."""

    mu_gamma: float
    sigma_gamma: float

    def __post_init__(self):
        if not math.isfinite(self.mu_gamma):
            raise InvalidArgumentError("mu_gamma must be finite")
        if not (math.isfinite(self.sigma_gamma) and self.sigma_gamma >= 0.0):
            raise InvalidArgumentError("sigma_gamma must be >= 0")

    @classmethod
    def from_link(cls, signal: LogNormalParams, interference: LogNormalParams) -> "SirDistribution":
        q = sir_combine(signal, interference)
        return cls(q.mu, q.sigma)

    @property
    def median_dB(self) -> float:
        return self.mu_gamma / XI

    @property
    def as_lognormal(self) -> LogNormalParams:
        return LogNormalParams(self.mu_gamma, self.sigma_gamma)


@dataclass(frozen=True)
class CapacityConfig:
    bandwidth_Hz: float = 1.0
    quadrature_order: int = DEFAULT_QUADRATURE_ORDER

    def __post_init__(self):
        if not (self.bandwidth_Hz > 0.0 and math.isfinite(self.bandwidth_Hz)):
            raise InvalidArgumentError("bandwidth must be positive")
        if self.quadrature_order < 8:
            raise InvalidArgumentError("capacity quadrature needs order >= 8")


def outage_probability(sir: SirDistribution, gamma_th_dB: float) -> float:
    """Pr[SIR < gamma_th] for a log-normal SIR."""
    if not math.isfinite(gamma_th_dB):
        raise InvalidArgumentError("gamma_th_dB must be finite")
    gap = sir.mu_gamma - gamma_th_dB * XI
    if sir.sigma_gamma == 0.0:
        return 1.0 if gap < 0.0 else 0.0
    return q_function(gap / sir.sigma_gamma)


def _log2_one_plus_exp(z):
    # log2(1 + e^z) without overflow for large z
    return np.logaddexp(0.0, z) / math.log(2.0)


def spectral_efficiency(sir: SirDistribution, order: int = DEFAULT_QUADRATURE_ORDER) -> float:
    """E[log2(1 + SIR)] in bit/s/Hz via Gauss-Hermite quadrature."""
    if sir.sigma_gamma == 0.0:
        return float(_log2_one_plus_exp(sir.mu_gamma))
    rule = gauss_hermite(order)
    z = math.sqrt(2.0) * sir.sigma_gamma * rule.nodes + sir.mu_gamma
    return float(np.dot(rule.weights, _log2_one_plus_exp(z)) / math.sqrt(math.pi))


def average_capacity(sir: SirDistribution, cfg: CapacityConfig = CapacityConfig()) -> float:
    """Average Shannon capacity W E[log2(1 + SIR)] in bit/s."""
    return cfg.bandwidth_Hz * spectral_efficiency(sir, cfg.quadrature_order)
