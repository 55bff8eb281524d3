"""
Aggregate interference in the five scenarios
============================================

Each scenario reduces to a signal and an interference log-normal. We compare
their medians with a Monte Carlo run of the same deployment.
"""

# %%
import math

from hetnet_cumulants import AnnularRegion, ChannelParams, ScenarioSpec, SimConfig, TierConfig
from hetnet_cumulants import build_link_budget, simulate_scenario

region = AnnularRegion(25.0, 250.0)
channel = ChannelParams(alpha=3.0, m=16.0, sigma_omega_dB=8.0)
pico = TierConfig(30.0, 1e-4, power_backoff_dB=math.inf)


def dbm(x):
    return 10 * math.log10(x)


# %%
# Macro at a fixed 137.5 m; detection threshold -30 dBm for ES4 and ES5.
for kind in ("ES1", "ES2", "ES3", "ES4", "ES5"):
    spec = ScenarioSpec(
        kind, region, channel, pico,
        macro=TierConfig(43.0), rho_th_dBm=-30.0,
        macro_distance_model="fixed", macro_distance_m=137.5,
    )
    link = build_link_budget(spec)
    sim = simulate_scenario(SimConfig(spec, 50_000, seed=1))
    print(
        f"{kind}  interference median {dbm(link.interference.median):7.2f} dBm (sim {dbm(sim.interference.median):7.2f})"
        f"  SIR median {link.sir.median_dB:6.2f} dB"
    )
