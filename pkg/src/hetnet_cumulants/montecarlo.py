"""Monte Carlo ground truth for every analytical quantity.

Deployments are marked Poisson fields over the annulus; fading marks are drawn
from the exact Gamma-log-normal composite (never the log-normal reduction).
Replicates are simulated in fixed-size blocks, each with its own generator
derived from ``(seed, block index)``, so results do not depend on the number
of worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .channel import ChannelParams, dbm_to_mw, sample_composite_fading
from .cumulants import AnnularRegion, normalized_threshold
from .errors import InvalidArgumentError
from .scenarios import ScenarioSpec

BLOCK_SIZE = 1 << 15


class EmpiricalDistribution:
    """Sorted sample with its right-continuous empirical CDF."""

    def __init__(self, samples):
        arr = np.sort(np.asarray(samples, dtype=float))
        if arr.size == 0:
            raise InvalidArgumentError("empirical distribution needs at least one sample")
        arr.setflags(write=False)
        self._samples = arr

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def count(self) -> int:
        return self._samples.size

    def __len__(self):
        return self.count

    def cdf(self, x):
        out = np.searchsorted(self._samples, np.asarray(x, dtype=float), side="right") / self.count
        return float(out) if np.ndim(out) == 0 else out

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def quantile(self, q):
        return np.quantile(self._samples, q)

    @property
    def median(self) -> float:
        return float(np.median(self._samples))

    def cumulants(self, order: int = 2) -> list[float]:
        """Unbiased k-statistics k_1..k_order (order <= 4)."""
        return [float(stats.kstat(self._samples, n)) for n in range(1, order + 1)]

    def cumulant_standard_errors(self) -> tuple[float, float]:
        """Large-sample standard errors of the sample mean and variance."""
        x = self._samples
        n = x.size
        centred = x - x.mean()
        m2 = float(np.mean(centred**2))
        m4 = float(np.mean(centred**4))
        return math.sqrt(m2 / n), math.sqrt(max(m4 - m2**2, 0.0) / n)


def empirical_cdf(d: EmpiricalDistribution, x):
    return d.cdf(x)


def ks_distance(d: EmpiricalDistribution, analytic_cdf) -> float:
    """sup |F_emp - F| evaluated at the sample points."""
    x = d.samples
    return float(np.max(np.abs(d.cdf(x) - np.asarray(analytic_cdf(x), dtype=float))))


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(block),)))


def _annulus_radii(region: AnnularRegion, rng: np.random.Generator, size) -> np.ndarray:
    # inverse of F(r) = (r^2 - R_m^2) / (R_M^2 - R_m^2)
    u = rng.random(size)
    return np.sqrt(region.r_min**2 + u * (region.r_max**2 - region.r_min**2))


def sample_deployment(region: AnnularRegion, density: float, rng: np.random.Generator) -> np.ndarray:
    """Distances of one Poisson deployment of the given density inside the annulus."""
    if density < 0:
        raise InvalidArgumentError("density must be >= 0")
    count = rng.poisson(density * region.area)
    return _annulus_radii(region, rng, count)


def sample_single_tx_power(
    region: AnnularRegion, p_dBm: float, ch: ChannelParams, size: int, rng: np.random.Generator
) -> np.ndarray:
    """Received power (mW) from one transmitter dropped uniformly in the annulus."""
    r = _annulus_radii(region, rng, size)
    return dbm_to_mw(p_dBm) * r ** (-ch.alpha) * sample_composite_fading(ch, rng, size)


@dataclass(frozen=True)
class SimConfig:
    scenario: ScenarioSpec
    replicates: int = 100_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise InvalidArgumentError("replicates must be >= 1")


@dataclass(frozen=True)
class SimResult:
    signal: EmpiricalDistribution
    interference: EmpiricalDistribution
    sir: EmpiricalDistribution | None
    censored: int
    replicates: int
    components: dict = field(default_factory=dict)

    @property
    def censoring_rate(self) -> float:
        return self.censored / self.replicates

    def outage_fraction(self, gamma_th_dB: float) -> float:
        """Share of replicates with SIR below threshold; censored ones count as outages."""
        below = 0 if self.sir is None else int(np.sum(self.sir.samples < 10.0 ** (gamma_th_dB / 10.0)))
        return (below + self.censored) / self.replicates

    def spectral_efficiency(self) -> float:
        """Sample mean of log2(1 + SIR) with censored replicates contributing zero."""
        if self.sir is None:
            return 0.0
        return float(np.sum(np.log2(1.0 + self.sir.samples)) / self.replicates)


def _simulate_block(spec: ScenarioSpec, seed: int, block: int, size: int) -> dict[str, np.ndarray]:
    rng = block_rng(seed, block)
    ch = spec.channel
    alpha = ch.alpha
    out: dict[str, np.ndarray] = {}

    # pico field
    lam = spec.pico.density
    counts = rng.poisson(lam * spec.region.area, size)
    total = int(counts.sum())
    r = _annulus_radii(spec.region, rng, total)
    x = sample_composite_fading(ch, rng, total)
    owner = np.repeat(np.arange(size), counts)
    gain = r ** (-alpha) * x

    def per_replicate(weights):
        return np.bincount(owner, weights=weights, minlength=size)

    if spec.kind in ("ES4", "ES5"):
        rho = normalized_threshold(spec.pico, spec.rho_th_dBm)
        detected = x >= rho * r**alpha
        out["pico_undetected"] = per_replicate(np.where(detected, 0.0, spec.pico.power_mw * gain))
        if spec.kind == "ES4":
            out["pico_detected"] = per_replicate(
                np.where(detected, spec.pico.backed_off_mw * gain, 0.0)
            )
        else:
            out["das"] = per_replicate(np.where(detected, spec.pico.power_mw * gain, 0.0))
    else:
        out["pico"] = per_replicate(spec.pico.power_mw * gain)

    # umbrella macro
    if spec.macro_distance_model == "fixed":
        d_macro = np.full(size, float(spec.macro_distance_m))
    else:
        d_macro = _annulus_radii(spec.macro_annulus, rng, size)
    macro = spec.macro.power_mw * d_macro ** (-alpha) * sample_composite_fading(ch, rng, size)

    # target pico
    if spec.serving_distance_model == "fixed" and spec.serving_pico_distance_m:
        d_target = np.full(size, float(spec.serving_pico_distance_m))
    else:
        d_target = _annulus_radii(spec.region, rng, size)
    x_target = sample_composite_fading(ch, rng, size)
    target = spec.pico.power_mw * d_target ** (-alpha) * x_target

    if spec.kind in ("ES2", "ES4", "ES5") and not spec.macro_silenced:
        out["macro"] = macro

    if spec.kind == "ES1":
        signal = macro
    elif spec.kind == "ES5":
        signal = out.pop("das")
        if spec.das_includes_target:
            rho = normalized_threshold(spec.pico, spec.rho_th_dBm)
            seen = x_target >= rho * d_target**alpha
            signal = signal + np.where(seen, target, 0.0)
    else:
        signal = target
    out["__signal__"] = signal
    return out


def simulate_scenario(cfg: SimConfig) -> SimResult:
    """Simulate ``cfg.replicates`` independent snapshots of the scenario."""
    spec = cfg.scenario
    n_blocks = -(-cfg.replicates // BLOCK_SIZE)
    sizes = [min(BLOCK_SIZE, cfg.replicates - b * BLOCK_SIZE) for b in range(n_blocks)]

    def work(b):
        return _simulate_block(spec, cfg.seed, b, sizes[b])

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            blocks = list(pool.map(work, range(n_blocks)))
    else:
        blocks = [work(b) for b in range(n_blocks)]

    merged = {k: np.concatenate([blk[k] for blk in blocks]) for k in blocks[0]}
    signal = merged.pop("__signal__")
    interference = np.zeros(cfg.replicates)
    for comp in merged.values():
        interference = interference + comp
    # an empty serving set (possible in ES5) is censored; zero interference gives SIR = inf
    served = signal > 0.0
    censored = int(cfg.replicates - served.sum())
    with np.errstate(divide="ignore"):
        sir = signal[served] / interference[served]
    return SimResult(
        signal=EmpiricalDistribution(signal),
        interference=EmpiricalDistribution(interference),
        sir=EmpiricalDistribution(sir) if sir.size else None,
        censored=censored,
        replicates=cfg.replicates,
        components={k: EmpiricalDistribution(v) for k, v in merged.items()},
    )
