"""
Outage and spectral efficiency versus pico density
==================================================

Denser picos add interference in ES2 and ES3, but in ES5 the detected picos
join the serving group, so more of them helps.
"""

# %%
import math

import numpy as np

from hetnet_cumulants import AnnularRegion, ChannelParams, ScenarioSpec, TierConfig
from hetnet_cumulants import build_link_budget, outage_probability
from hetnet_cumulants.metrics import spectral_efficiency

region = AnnularRegion(25.0, 250.0)
channel = ChannelParams(alpha=3.0, m=16.0, sigma_omega_dB=8.0)
kinds = ("ES2", "ES3", "ES4", "ES5")

# %%
print("density    " + "  ".join(f"{k:>12}" for k in kinds))
for lam in np.geomspace(1e-5, 2e-4, 6):
    row = []
    for kind in kinds:
        spec = ScenarioSpec(
            kind, region, channel, TierConfig(30.0, lam, power_backoff_dB=math.inf),
            rho_th_dBm=-30.0, macro_distance_model="fixed", macro_distance_m=137.5,
            das_includes_target=True,
        )
        sir = build_link_budget(spec).sir
        row.append(f"{outage_probability(sir, 0.0):5.3f}/{spectral_efficiency(sir):5.2f}")
    print(f"{lam:9.2e}  " + "  ".join(f"{c:>12}" for c in row))
print("cells: outage at 0 dB / bit/s/Hz")
