"""Propagation model: unbounded path loss and Gamma-log-normal shadowed fading.

All powers are linear mW internally; log-normal parameters are in natural-log
units. Decibel quantities only appear in :class:`ChannelParams` fields and the
``*_dB`` helpers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, SingularityError
from .lognormal import LogNormalParams
from .specfun import digamma, trigamma_hurwitz

XI = math.log(10.0) / 10.0  # nepers per decibel
DB_PER_NEPER = 1.0 / XI

# How the fading term of the single log-normal reduction is scaled into dB.
# "ho" uses 10/ln(10) (the scaling that matches composite sampling);
# "paper" uses ln(10)/10 literally as printed.
XI_CONVENTIONS = ("ho", "paper")


def db_to_linear(x_db):
    return np.power(10.0, np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def dbm_to_mw(p_dbm: float) -> float:
    return float(10.0 ** (p_dbm / 10.0))


def mw_to_dbm(p_mw):
    return 10.0 * np.log10(p_mw)


@dataclass(frozen=True)
class ChannelParams:
    """Path loss exponent plus Nakagami-m fading under log-normal shadowing.

    ``mu_omega_dB`` and ``sigma_omega_dB`` describe the shadowed mean power
    Omega_p in dB.
    """

    alpha: float = 3.0
    m: float = 16.0
    sigma_omega_dB: float = 8.0
    mu_omega_dB: float = 0.0
    xi_convention: str = "ho"

    def __post_init__(self):
        if self.alpha == 2.0:
            raise SingularityError("alpha == 2 puts a pole in the first cumulant (n * alpha == 2)")
        if not (math.isfinite(self.alpha) and self.alpha > 2.0):
            raise InvalidArgumentError(f"alpha must be > 2, got {self.alpha}")
        if not (math.isfinite(self.m) and self.m >= 0.5):
            raise InvalidArgumentError(f"Nakagami m must be >= 0.5, got {self.m}")
        if not (math.isfinite(self.sigma_omega_dB) and self.sigma_omega_dB >= 0.0):
            raise InvalidArgumentError(
                f"sigma_omega_dB must be >= 0, got {self.sigma_omega_dB}"
            )
        if not math.isfinite(self.mu_omega_dB):
            raise InvalidArgumentError("mu_omega_dB must be finite")
        if self.xi_convention not in XI_CONVENTIONS:
            raise InvalidArgumentError(
                f"xi_convention must be one of {XI_CONVENTIONS}, got {self.xi_convention!r}"
            )

    @property
    def shadowing(self) -> LogNormalParams:
        """Log-normal law of Omega_p alone, natural-log units."""
        return LogNormalParams(XI * self.mu_omega_dB, XI * self.sigma_omega_dB)


def path_loss(r, alpha: float):
    """Unbounded path loss r**(-alpha)."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr <= 0.0):
        raise InvalidArgumentError("path_loss is unbounded at r <= 0")
    out = arr ** (-alpha)
    return float(out) if out.ndim == 0 else out


def ho_ln_equivalent_db(ch: ChannelParams) -> tuple[float, float]:
    """(mu_dB, sigma_dB) of the single log-normal replacing the composite fading."""
    offset = digamma(ch.m) - math.log(ch.m)
    zeta2 = trigamma_hurwitz(ch.m)
    scale = DB_PER_NEPER if ch.xi_convention == "ho" else XI
    mu_db = scale * offset + ch.mu_omega_dB
    var_db = scale**2 * zeta2 + ch.sigma_omega_dB**2
    return mu_db, math.sqrt(var_db)


def ho_ln_equivalent(ch: ChannelParams) -> LogNormalParams:
    """Single log-normal approximation of the Gamma-log-normal fading X.

    With the default ``"ho"`` convention this matches E[ln X] and Var[ln X]
    of the composite exactly.
    """
    mu_db, sigma_db = ho_ln_equivalent_db(ch)
    return LogNormalParams(XI * mu_db, XI * sigma_db)


def sample_composite_fading(ch: ChannelParams, rng: np.random.Generator, size=None):
    """Draw X ~ Gamma(m, Omega/m) with Omega log-normally shadowed.

    The draw is exact; it does not use the single log-normal reduction.
    """
    shadow = ch.shadowing
    omega = np.exp(shadow.mu + shadow.sigma * rng.standard_normal(size))
    x = rng.gamma(ch.m, 1.0, size) * (omega / ch.m)
    return x
