"""
Fitting a log-normal to the power from one random pico
=======================================================

A single pico dropped uniformly in an annulus delivers a power that mixes
path loss, shadowing and Nakagami fading. Two cumulants pin down a log-normal;
here we see how well that fit tracks exact composite draws.
"""

# %%
import numpy as np

from hetnet_cumulants import AnnularRegion, ChannelParams, EmpiricalDistribution, ks_distance, ln_from_cumulants
from hetnet_cumulants import single_tx_cumulants
from hetnet_cumulants.montecarlo import sample_single_tx_power

region = AnnularRegion(5.0, 75.0)
rng = np.random.default_rng(3)

# %%
# The fit gets better as shadowing dominates the spread of path loss.
for sigma in (6.0, 8.0, 10.0, 12.0):
    ch = ChannelParams(alpha=3.0, m=16.0, sigma_omega_dB=sigma)
    fit = ln_from_cumulants(single_tx_cumulants(region, 30.0, ch, 2))
    draws = EmpiricalDistribution(sample_single_tx_power(region, 30.0, ch, 100_000, rng))
    print(f"sigma {sigma:4.1f} dB  median {10 * np.log10(fit.median):7.2f} dBm  KS {ks_distance(draws, fit.cdf):.3f}")

# %%
# Where does the fit miss? Compare a few quantiles.
ch = ChannelParams(alpha=3.0, m=16.0, sigma_omega_dB=8.0)
fit = ln_from_cumulants(single_tx_cumulants(region, 30.0, ch, 2))
draws = EmpiricalDistribution(sample_single_tx_power(region, 30.0, ch, 100_000, rng))
for q in (0.01, 0.1, 0.5, 0.9, 0.99):
    print(f"q={q:4.2f}  sim {10 * np.log10(draws.quantile(q)):7.2f} dBm  fit {10 * np.log10(fit.ppf(q)):7.2f} dBm")
