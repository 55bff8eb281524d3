"""Evaluation scenarios ES1-ES5 as (signal, interference) log-normal pairs.

ES1  tagged user served by the macro; full pico interference.
ES2  served by the target pico (range expansion); macro and picos interfere.
ES3  as ES2 with almost-blank subframes: the macro is silent on the tagged link.
ES4  as ES2 with pilot-threshold coordination: detected picos back off,
     undetected picos transmit at full power, the macro still interferes.
ES5  detected picos jointly serve the user (powers add); undetected picos and
     the macro interfere.

The ``abs_with_coordination`` switch additionally silences the macro in ES4
and ES5. ``das_includes_target`` adds the target pico to the ES5 serving group
whenever its pilot passes the detection threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .association import AssociationPolicy
from .channel import ChannelParams, ho_ln_equivalent
from .cumulants import (
    DEFAULT_ORDER,
    AnnularRegion,
    TierConfig,
    combine_tiers,
    fixed_distance_cumulants,
    normalized_threshold,
    ppp_aggregate_cumulants,
    r1_cumulants,
    r2_cumulants,
    single_tx_cumulants,
)
from .errors import InvalidArgumentError
from .lognormal import CumulantVec, LogNormalParams, ln_from_cumulants, partial_moment
from .metrics import SirDistribution
from .specfun import cumulants_from_moments

KINDS = ("ES1", "ES2", "ES3", "ES4", "ES5")
DISTANCE_MODELS = ("annulus", "fixed")


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str
    region: AnnularRegion
    channel: ChannelParams
    pico: TierConfig
    macro: TierConfig = field(default_factory=lambda: TierConfig(tx_power_dBm=46.0))
    policy: AssociationPolicy = field(default_factory=AssociationPolicy)
    rho_th_dBm: float | None = None
    abs_duty: float = 0.5
    serving_pico_distance_m: float | None = 45.0
    serving_distance_model: str = "fixed"
    macro_distance_model: str = "annulus"
    macro_distance_m: float | None = None
    macro_region: AnnularRegion | None = None
    abs_with_coordination: bool = False
    das_includes_target: bool = False
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"scenario kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind in ("ES4", "ES5"):
            if self.rho_th_dBm is None or math.isnan(self.rho_th_dBm):
                raise InvalidArgumentError(f"rho_th_dBm is required for {self.kind}")
        if not 0.0 < self.abs_duty <= 1.0:
            raise InvalidArgumentError(f"abs_duty must lie in (0, 1], got {self.abs_duty}")
        if self.serving_distance_model not in DISTANCE_MODELS:
            raise InvalidArgumentError(f"unknown serving_distance_model {self.serving_distance_model!r}")
        if self.macro_distance_model not in DISTANCE_MODELS:
            raise InvalidArgumentError(f"unknown macro_distance_model {self.macro_distance_model!r}")
        if self.macro_distance_model == "fixed" and not (self.macro_distance_m or 0) > 0:
            raise InvalidArgumentError("macro_distance_m is required for a fixed macro distance")
        needs_target = self.kind in ("ES2", "ES3", "ES4") or (
            self.kind == "ES5" and self.das_includes_target
        )
        if (
            needs_target
            and self.serving_distance_model == "fixed"
            and not (self.serving_pico_distance_m or 0) > 0
        ):
            raise InvalidArgumentError(f"serving_pico_distance_m is required for {self.kind}")

    def with_kind(self, kind: str) -> "ScenarioSpec":
        return replace(self, kind=kind)

    @property
    def macro_annulus(self) -> AnnularRegion:
        return self.macro_region or self.region

    @property
    def macro_silenced(self) -> bool:
        if self.kind == "ES3":
            return True
        return self.kind in ("ES4", "ES5") and self.abs_with_coordination


@dataclass(frozen=True)
class LinkBudget:
    kind: str
    signal: LogNormalParams
    interference: LogNormalParams
    signal_cumulants: CumulantVec
    components: dict

    @property
    def interference_cumulants(self) -> CumulantVec:
        return combine_tiers(*self.components.values())

    @property
    def sir(self) -> SirDistribution:
        return SirDistribution.from_link(self.signal, self.interference)


def macro_cumulants(spec: ScenarioSpec) -> CumulantVec:
    """Cumulants of the power received from the umbrella macro."""
    if spec.macro_distance_model == "fixed":
        return fixed_distance_cumulants(
            spec.macro_distance_m, spec.macro.tx_power_dBm, spec.channel, spec.order
        )
    return single_tx_cumulants(spec.macro_annulus, spec.macro.tx_power_dBm, spec.channel, spec.order)


def serving_pico_cumulants(spec: ScenarioSpec) -> CumulantVec:
    """Cumulants of the power received from the target pico."""
    if spec.serving_distance_model == "fixed":
        return fixed_distance_cumulants(
            spec.serving_pico_distance_m, spec.pico.tx_power_dBm, spec.channel, spec.order
        )
    return single_tx_cumulants(spec.region, spec.pico.tx_power_dBm, spec.channel, spec.order)


def detected_target_cumulants(spec: ScenarioSpec) -> CumulantVec:
    """Cumulants of the target pico's power, counted only when its pilot is detected."""
    if spec.serving_distance_model != "fixed":
        raise InvalidArgumentError("a detected-target term needs a fixed serving distance")
    d = spec.serving_pico_distance_m
    fading = ho_ln_equivalent(spec.channel)
    threshold = normalized_threshold(spec.pico, spec.rho_th_dBm) * d**spec.channel.alpha
    gain = spec.pico.power_mw * d ** (-spec.channel.alpha)
    moments = [gain**n * partial_moment(fading, n, threshold, math.inf) for n in range(1, spec.order + 1)]
    return CumulantVec(tuple(cumulants_from_moments(moments)))


def virtual_das_signal_cumulants(spec: ScenarioSpec, order: int | None = None) -> CumulantVec:
    """Cumulants of the summed power of all detected picos, each at full power."""
    if spec.kind != "ES5":
        raise InvalidArgumentError("virtual DAS signal is only defined for ES5")
    order = spec.order if order is None else order
    return r1_cumulants(
        spec.region, spec.pico, spec.channel, spec.rho_th_dBm, order, power_mw=spec.pico.power_mw
    )


def interference_components(spec: ScenarioSpec) -> dict[str, CumulantVec]:
    """Per-source interference cumulants for the scenario (names are stable labels)."""
    parts: dict[str, CumulantVec] = {}
    if spec.kind in ("ES2", "ES4", "ES5") and not spec.macro_silenced:
        parts["macro"] = macro_cumulants(spec)
    if spec.kind in ("ES1", "ES2", "ES3"):
        parts["pico"] = ppp_aggregate_cumulants(spec.region, spec.pico, spec.channel, spec.order)
    elif spec.kind == "ES4":
        parts["pico_detected"] = r1_cumulants(
            spec.region, spec.pico, spec.channel, spec.rho_th_dBm, spec.order
        )
        parts["pico_undetected"] = r2_cumulants(
            spec.region, spec.pico, spec.channel, spec.rho_th_dBm, spec.order
        )
    else:
        parts["pico_undetected"] = r2_cumulants(
            spec.region, spec.pico, spec.channel, spec.rho_th_dBm, spec.order
        )
    return parts


def signal_cumulants(spec: ScenarioSpec) -> CumulantVec:
    if spec.kind == "ES1":
        return macro_cumulants(spec)
    if spec.kind == "ES5":
        das = virtual_das_signal_cumulants(spec)
        if spec.das_includes_target:
            das = combine_tiers(das, detected_target_cumulants(spec))
        return das
    return serving_pico_cumulants(spec)


def build_link_budget(spec: ScenarioSpec) -> LinkBudget:
    """Compose signal and aggregate interference log-normals for one scenario."""
    sig = signal_cumulants(spec)
    parts = interference_components(spec)
    total = combine_tiers(*parts.values())
    if not sig[0] > 0.0:
        raise InvalidArgumentError(f"{spec.kind}: the serving signal vanishes, SIR is undefined")
    if not total[0] > 0.0:
        raise InvalidArgumentError(f"{spec.kind}: interference vanishes, SIR is undefined")
    return LinkBudget(spec.kind, ln_from_cumulants(sig), ln_from_cumulants(total), sig, parts)
