"""Cumulants of received power and aggregate interference over an annulus.

Covers a single transmitter placed uniformly at random in the observation
annulus, a marked Poisson field of interferers (Campbell's theorem), and the
split of that field into detected / undetected sets by a pilot-power threshold.
The fading mark enters only through the single log-normal reduction of
:mod:`hetnet_cumulants.channel`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelParams, dbm_to_mw, ho_ln_equivalent
from .errors import InvalidArgumentError, SingularityError
from .lognormal import CumulantVec, partial_moment
from .specfun import MAX_BELL_ORDER, cumulants_from_moments

DEFAULT_ORDER = 4
MAX_SINGLE_TX_ORDER = 8


@dataclass(frozen=True)
class AnnularRegion:
    """Annulus r_min < r < r_max (metres) around the tagged receiver."""

    r_min: float
    r_max: float

    def __post_init__(self):
        if not (0.0 < self.r_min < self.r_max < math.inf):
            raise InvalidArgumentError(
                f"annulus needs 0 < r_min < r_max < inf, got ({self.r_min}, {self.r_max})"
            )

    @property
    def area(self) -> float:
        return math.pi * (self.r_max**2 - self.r_min**2)


@dataclass(frozen=True)
class TierConfig:
    """Transmit settings of one tier.

    ``density`` is in nodes/m^2 (0 for a single deterministic transmitter).
    ``pilot_power_dBm`` defaults to the data power. ``power_backoff_dB`` is
    the reduction applied by coordinated (detected) nodes; ``inf`` mutes them.
    """

    tx_power_dBm: float
    density: float = 0.0
    pilot_power_dBm: float | None = None
    power_backoff_dB: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.tx_power_dBm):
            raise InvalidArgumentError("tx_power_dBm must be finite")
        if not (math.isfinite(self.density) and self.density >= 0.0):
            raise InvalidArgumentError(f"density must be >= 0, got {self.density}")
        if self.pilot_power_dBm is not None and not math.isfinite(self.pilot_power_dBm):
            raise InvalidArgumentError("pilot_power_dBm must be finite")
        if not self.power_backoff_dB >= 0.0:
            raise InvalidArgumentError(
                f"power_backoff_dB must be >= 0, got {self.power_backoff_dB}"
            )

    @property
    def power_mw(self) -> float:
        return dbm_to_mw(self.tx_power_dBm)

    @property
    def pilot_mw(self) -> float:
        if self.pilot_power_dBm is None:
            return self.power_mw
        return dbm_to_mw(self.pilot_power_dBm)

    @property
    def backed_off_mw(self) -> float:
        if self.power_backoff_dB == math.inf:
            return 0.0
        return dbm_to_mw(self.tx_power_dBm - self.power_backoff_dB)


def _check_order(order: int, alpha: float, limit: int) -> None:
    if not 1 <= order <= limit:
        raise InvalidArgumentError(f"cumulant order must be in [1, {limit}], got {order}")
    for n in range(1, order + 1):
        if math.isclose(n * alpha, 2.0, rel_tol=0.0, abs_tol=1e-12):
            raise SingularityError(f"n * alpha == 2 at n={n}, alpha={alpha}")


def _power_difference(r_lo: float, r_hi: float, s: float) -> float:
    """r_lo**s - r_hi**s, accurate when r_hi is close to r_lo; r_hi may be inf."""
    if r_hi == math.inf:
        if s >= 0.0:
            raise InvalidArgumentError("radial integral diverges for an unbounded annulus")
        return r_lo**s
    return -(r_lo**s) * math.expm1(s * math.log(r_hi / r_lo))


def radial_factor(r_min: float, r_max: float, n: int, alpha: float) -> float:
    """int_{r_min}^{r_max} r**(1 - n alpha) dr = (r_min**s - r_max**s) / (n alpha - 2), s = 2 - n alpha."""
    return _power_difference(r_min, r_max, 2.0 - n * alpha) / (n * alpha - 2.0)


def fading_moment(ch: ChannelParams, n: float) -> float:
    """E[X**n] of the fading mark under its single log-normal reduction."""
    return ho_ln_equivalent(ch).moment(n)


def single_tx_moments(
    region: AnnularRegion, p_dBm: float, ch: ChannelParams, order: int = DEFAULT_ORDER
) -> list[float]:
    """Raw moments E[Y**n] of Y = p R**(-alpha) X, R uniform over the annulus area."""
    _check_order(order, ch.alpha, MAX_SINGLE_TX_ORDER)
    p = dbm_to_mw(p_dBm)
    # density normalisation 2 / (r_max**2 - r_min**2), written stably
    norm = 2.0 / (region.r_min**2 * math.expm1(2.0 * math.log(region.r_max / region.r_min)))
    return [
        norm * p**n * radial_factor(region.r_min, region.r_max, n, ch.alpha) * fading_moment(ch, n)
        for n in range(1, order + 1)
    ]


def single_tx_cumulants(
    region: AnnularRegion, p_dBm: float, ch: ChannelParams, order: int = DEFAULT_ORDER
) -> CumulantVec:
    """Cumulants of the power received from one transmitter dropped uniformly in the annulus.

    The characteristic function derivatives at zero are j**n times the raw
    moments; Faa di Bruno on ln(.) with the normalised base value f(0) = 1
    turns them into cumulants.
    """
    return CumulantVec(tuple(cumulants_from_moments(single_tx_moments(region, p_dBm, ch, order))))


def fixed_distance_cumulants(
    distance: float, p_dBm: float, ch: ChannelParams, order: int = DEFAULT_ORDER
) -> CumulantVec:
    """Cumulants of p d**(-alpha) X for a transmitter at a fixed distance."""
    if not distance > 0.0:
        raise InvalidArgumentError(f"distance must be positive, got {distance}")
    if not 1 <= order <= MAX_BELL_ORDER:
        raise InvalidArgumentError(f"cumulant order must be in [1, {MAX_BELL_ORDER}]")
    gain = dbm_to_mw(p_dBm) * distance ** (-ch.alpha)
    moments = [gain**n * fading_moment(ch, n) for n in range(1, order + 1)]
    return CumulantVec(tuple(cumulants_from_moments(moments)))


def _ppp_prefactor(tier: TierConfig, power_mw: float, n: int, alpha: float) -> float:
    return 2.0 * math.pi * tier.density * power_mw**n / (n * alpha - 2.0)


def _require_field(region: AnnularRegion, tier: TierConfig, ch: ChannelParams, order: int):
    if not tier.density > 0.0:
        raise InvalidArgumentError("a Poisson field needs density > 0")
    _check_order(order, ch.alpha, MAX_BELL_ORDER)


def ppp_aggregate_cumulants(
    region: AnnularRegion, tier: TierConfig, ch: ChannelParams, order: int = DEFAULT_ORDER
) -> CumulantVec:
    """Cumulants of the aggregate power from a marked Poisson field in the annulus.

    kappa_n = 2 pi lambda p**n / (n alpha - 2) (R_m**(2 - n alpha) - R_M**(2 - n alpha)) E[X**n]
    """
    _require_field(region, tier, ch, order)
    p = tier.power_mw
    return CumulantVec(
        tuple(
            _ppp_prefactor(tier, p, n, ch.alpha)
            * _power_difference(region.r_min, region.r_max, 2.0 - n * ch.alpha)
            * fading_moment(ch, n)
            for n in range(1, order + 1)
        )
    )


def combine_tiers(*parts: CumulantVec) -> CumulantVec:
    """Cumulants of a sum of independent components (elementwise addition)."""
    if not parts:
        raise InvalidArgumentError("combine_tiers needs at least one cumulant vector")
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def normalized_threshold(tier: TierConfig, rho_th_dBm: float) -> float:
    """Threshold on the fading mark per unit r**alpha: rho_th / p_b (linear)."""
    if math.isnan(rho_th_dBm):
        raise InvalidArgumentError("rho_th_dBm must not be NaN")
    if rho_th_dBm == math.inf:
        return math.inf
    if rho_th_dBm == -math.inf:
        return 0.0
    return dbm_to_mw(rho_th_dBm) / tier.pilot_mw


def _band_terms(region, ch, rho_th_dBm, tier, n):
    """Partial moments of X over the three detection bands for order n.

    Returns (tail_below, band_n, band_frac_scaled, tail_above) where
    band_frac_scaled = varrho_th**(n - 2/alpha) * E_X^{2/alpha}[varrho_m, varrho_M].
    """
    fading = ho_ln_equivalent(ch)
    alpha = ch.alpha
    varrho_th = normalized_threshold(tier, rho_th_dBm)
    varrho_m = varrho_th * region.r_min**alpha
    varrho_M = varrho_th * region.r_max**alpha
    below = partial_moment(fading, n, 0.0, varrho_m)
    band_n = partial_moment(fading, n, varrho_m, varrho_M)
    above = partial_moment(fading, n, varrho_M, math.inf)
    band_frac = partial_moment(fading, 2.0 / alpha, varrho_m, varrho_M)
    scaled = 0.0 if band_frac == 0.0 else varrho_th ** (n - 2.0 / alpha) * band_frac
    return below, band_n, scaled, above


def r1_cumulants(
    region: AnnularRegion,
    tier: TierConfig,
    ch: ChannelParams,
    rho_th_dBm: float,
    order: int = DEFAULT_ORDER,
    power_mw: float | None = None,
) -> CumulantVec:
    """Cumulants of the interference from detected nodes (pilot at or above the threshold).

    Detected nodes transmit at the backed-off power unless ``power_mw`` is
    given explicitly.
    """
    _require_field(region, tier, ch, order)
    p = tier.backed_off_mw if power_mw is None else power_mw
    values = []
    for n in range(1, order + 1):
        s = 2.0 - n * ch.alpha
        below, band_n, band_scaled, above = _band_terms(region, ch, rho_th_dBm, tier, n)
        r_min_s = region.r_min**s
        bracket = (
            _power_difference(region.r_min, region.r_max, s) * above
            - band_scaled
            + r_min_s * band_n
        )
        values.append(_ppp_prefactor(tier, p, n, ch.alpha) * max(bracket, 0.0))
    return CumulantVec(tuple(values))


def r2_cumulants(
    region: AnnularRegion,
    tier: TierConfig,
    ch: ChannelParams,
    rho_th_dBm: float,
    order: int = DEFAULT_ORDER,
) -> CumulantVec:
    """Cumulants of the interference from undetected nodes, at full power."""
    _require_field(region, tier, ch, order)
    p = tier.power_mw
    values = []
    for n in range(1, order + 1):
        s = 2.0 - n * ch.alpha
        below, band_n, band_scaled, above = _band_terms(region, ch, rho_th_dBm, tier, n)
        r_max_s = region.r_max**s
        bracket = (
            _power_difference(region.r_min, region.r_max, s) * below
            + band_scaled
            - r_max_s * band_n
        )
        values.append(_ppp_prefactor(tier, p, n, ch.alpha) * max(bracket, 0.0))
    return CumulantVec(tuple(values))


def detection_intensity(
    region: AnnularRegion, tier: TierConfig, ch: ChannelParams, rho_th_dBm: float
) -> float:
    """Mean number of detected nodes in the annulus (intensity measure of the detected set)."""
    fading = ho_ln_equivalent(ch)
    alpha = ch.alpha
    varrho_th = normalized_threshold(tier, rho_th_dBm)
    varrho_m = varrho_th * region.r_min**alpha
    varrho_M = varrho_th * region.r_max**alpha
    # int 2 pi lambda r Pr[X >= varrho_th r**alpha] dr, split as in the cumulants
    above = partial_moment(fading, 0.0, varrho_M, math.inf)
    band0 = partial_moment(fading, 0.0, varrho_m, varrho_M)
    band_frac = partial_moment(fading, 2.0 / alpha, varrho_m, varrho_M)
    scaled = 0.0 if band_frac == 0.0 else varrho_th ** (-2.0 / alpha) * band_frac
    inner = 0.5 * (region.r_max**2 - region.r_min**2) * above + 0.5 * (scaled - region.r_min**2 * band0)
    return 2.0 * math.pi * tier.density * inner


def neglected_tail_fraction(region: AnnularRegion, ch: ChannelParams, tier: TierConfig) -> float:
    """Share of the mean interference of an unbounded field that lies beyond r_max."""
    beyond = _power_difference(region.r_max, math.inf, 2.0 - ch.alpha)
    total = _power_difference(region.r_min, math.inf, 2.0 - ch.alpha)
    # the field prefactor and fading moment cancel; kept implicit
    return beyond / total
