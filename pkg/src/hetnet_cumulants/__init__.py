"""Cumulant-based interference analysis for two-tier macro/pico networks."""
from .association import (
    AssociationPolicy,
    handover_probability,
    handover_probability_closed_form,
    handover_probability_mc,
)
from .channel import ChannelParams, ho_ln_equivalent, path_loss, sample_composite_fading
from .cumulants import (
    AnnularRegion,
    TierConfig,
    neglected_tail_fraction,
    ppp_aggregate_cumulants,
    r1_cumulants,
    r2_cumulants,
    single_tx_cumulants,
)
from .errors import InvalidArgumentError, SingularityError
from .lognormal import CumulantVec, LogNormalParams, ln_from_cumulants, partial_moment
from .metrics import CapacityConfig, SirDistribution, average_capacity, outage_probability
from .montecarlo import EmpiricalDistribution, SimConfig, ks_distance, simulate_scenario
from .scenarios import ScenarioSpec, build_link_budget
from .specfun import bell_partial, gauss_hermite, q_function

__all__ = [
    "AnnularRegion",
    "AssociationPolicy",
    "CapacityConfig",
    "ChannelParams",
    "CumulantVec",
    "EmpiricalDistribution",
    "InvalidArgumentError",
    "LogNormalParams",
    "ScenarioSpec",
    "SimConfig",
    "SingularityError",
    "SirDistribution",
    "TierConfig",
    "average_capacity",
    "bell_partial",
    "build_link_budget",
    "gauss_hermite",
    "handover_probability",
    "handover_probability_closed_form",
    "handover_probability_mc",
    "ho_ln_equivalent",
    "ks_distance",
    "ln_from_cumulants",
    "neglected_tail_fraction",
    "outage_probability",
    "partial_moment",
    "path_loss",
    "ppp_aggregate_cumulants",
    "q_function",
    "r1_cumulants",
    "r2_cumulants",
    "sample_composite_fading",
    "simulate_scenario",
    "single_tx_cumulants",
]
