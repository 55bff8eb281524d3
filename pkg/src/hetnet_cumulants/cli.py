"""Command-line front end: ``analyze --config run.json --mode both --output out.csv``.

A config is a JSON tree whose dotted leaf names are the schema (``channel.alpha``,
``pico.density``, ``region.r_min_m`` ...). Human-facing units are dB, dBm and
metres. A ``series`` list holds per-curve overrides keyed by dotted names.

Exit codes: 0 ok, 2 config/schema error, 3 numerical singularity.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .association import AssociationPolicy, handover_probability, handover_probability_closed_form
from .association import handover_probability_mc
from .channel import ChannelParams
from .cumulants import AnnularRegion, TierConfig, single_tx_cumulants
from .errors import InvalidArgumentError, SingularityError
from .lognormal import LogNormalParams, ln_from_cumulants
from .metrics import CapacityConfig, outage_probability, spectral_efficiency
from .montecarlo import SimConfig, sample_single_tx_power, simulate_scenario
from .scenarios import ScenarioSpec, build_link_budget, macro_cumulants, serving_pico_cumulants

CURVES = ("ccdf", "cdf", "outage", "capacity", "handover")
EXIT_SCHEMA = 2
EXIT_SINGULAR = 3

# dotted field -> (type, default); None default means "absent unless given"
SCHEMA: dict[str, tuple[type, object]] = {
    "name": (str, "custom"),
    "notes": (str, ""),
    "curve": (str, "outage"),
    "source": (str, "pico"),
    "scenario.kind": (str, "ES2"),
    "channel.alpha": (float, 3.0),
    "channel.m": (float, 16.0),
    "channel.sigma_omega_dB": (float, 8.0),
    "channel.mu_omega_dB": (float, 0.0),
    "channel.xi_convention": (str, "ho"),
    "region.r_min_m": (float, 25.0),
    "region.r_max_m": (float, 250.0),
    "pico.tx_power_dBm": (float, 30.0),
    "pico.density": (float, 1e-5),
    "pico.pilot_power_dBm": (float, None),
    "pico.power_backoff_dB": (float, 0.0),
    "macro.tx_power_dBm": (float, 46.0),
    "macro.distance_model": (str, "annulus"),
    "macro.distance_m": (float, None),
    "macro.r_min_m": (float, None),
    "macro.r_max_m": (float, None),
    "serving.distance_model": (str, "fixed"),
    "serving.distance_m": (float, 45.0),
    "policy.reb_bias_dB": (float, 0.0),
    "policy.hysteresis_dB": (float, 0.0),
    "policy.bias_mode": (str, "multiplicative-linear"),
    "rho_th_dBm": (float, None),
    "abs_duty": (float, 0.5),
    "abs_with_coordination": (bool, False),
    "das_includes_target": (bool, False),
    "gamma_th_dB": (float, 0.0),
    "bandwidth_Hz": (float, 1.0),
    "quadrature_order": (int, 32),
    "cumulant_order": (int, 4),
    "x_dBm.start": (float, -100.0),
    "x_dBm.stop": (float, 0.0),
    "x_dBm.points": (int, 101),
    "sweep": (str, None),
}
NUMERIC_FIELDS = tuple(k for k, (t, _) in SCHEMA.items() if t in (float, int))


class ConfigError(Exception):
    """Schema violation; the message names the offending field or line."""


@dataclass(frozen=True)
class SweepSpec:
    field: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


def parse_sweep(text: str) -> SweepSpec:
    """Parse ``FIELD=START:STOP:POINTS[:log]``."""
    try:
        field, rng = text.split("=", 1)
        parts = rng.split(":")
        if len(parts) not in (3, 4):
            raise ValueError
        scale = parts[3] if len(parts) == 4 else "linear"
        spec = SweepSpec(field.strip(), float(parts[0]), float(parts[1]), int(parts[2]), scale)
    except ValueError:
        raise ConfigError(f"sweep: expected FIELD=START:STOP:POINTS[:log], got {text!r}") from None
    if spec.field not in NUMERIC_FIELDS:
        raise ConfigError(f"sweep: {spec.field!r} is not a real scalar field of the schema")
    if spec.scale not in ("linear", "log"):
        raise ConfigError(f"sweep: scale must be 'linear' or 'log', got {spec.scale!r}")
    if spec.points < 1:
        raise ConfigError("sweep: points must be >= 1")
    if spec.scale == "log" and not (spec.start > 0 and spec.stop > 0):
        raise ConfigError("sweep: log scale needs positive bounds")
    return spec


def _flatten(tree: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in tree.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        else:
            flat[name] = value
    return flat


def _coerce(field: str, value):
    kind, _ = SCHEMA[field]
    if value is None:
        return None
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{field}: expected true/false, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{field}: expected a string, got {value!r}")
        return value
    if isinstance(value, bool):
        raise ConfigError(f"{field}: expected a number, got {value!r}")
    try:
        # strings allow "inf" for an unbounded back-off
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{field}: expected a number, got {value!r}") from None
    if math.isnan(number):
        raise ConfigError(f"{field}: NaN is not allowed")
    if kind is int:
        if number != int(number):
            raise ConfigError(f"{field}: expected an integer, got {value!r}")
        return int(number)
    return number


def _validated(flat: dict, where: str) -> dict:
    out = {}
    for field, value in flat.items():
        if field not in SCHEMA:
            raise ConfigError(f"{where}unknown field {field!r}")
        out[field] = _coerce(field, value)
    return out


@dataclass(frozen=True)
class RunConfig:
    base: dict
    series: tuple[tuple[str, dict], ...]

    def resolved(self, overrides: dict) -> dict:
        merged = {k: d for k, (_, d) in SCHEMA.items()}
        merged.update(self.base)
        merged.update(overrides)
        return merged


def parse_config(text: str) -> RunConfig:
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(tree, dict):
        raise ConfigError("top level must be an object")
    series_raw = tree.pop("series", None)
    base = _validated(_flatten(tree), "")
    if base.get("curve", "outage") not in CURVES:
        raise ConfigError(f"curve: must be one of {CURVES}, got {base['curve']!r}")
    series = []
    for i, item in enumerate(series_raw or [{}]):
        if not isinstance(item, dict):
            raise ConfigError(f"series[{i}]: expected an object")
        item = dict(item)
        label = str(item.pop("label", base.get("scenario.kind", f"s{i}")))
        series.append((label, _validated(_flatten(item), f"series[{i}]: ")))
    return RunConfig(base, tuple(series))


def _field_error(field: str, exc: Exception) -> ConfigError:
    return ConfigError(f"{field}: {exc}")


def build_channel(c: dict) -> ChannelParams:
    try:
        return ChannelParams(
            alpha=c["channel.alpha"],
            m=c["channel.m"],
            sigma_omega_dB=c["channel.sigma_omega_dB"],
            mu_omega_dB=c["channel.mu_omega_dB"],
            xi_convention=c["channel.xi_convention"],
        )
    except SingularityError:
        raise
    except InvalidArgumentError as exc:
        raise _field_error("channel", exc) from None


def build_scenario(c: dict) -> ScenarioSpec:
    """Translate a resolved config dict into a validated ScenarioSpec."""
    ch = build_channel(c)
    try:
        region = AnnularRegion(c["region.r_min_m"], c["region.r_max_m"])
    except InvalidArgumentError as exc:
        raise _field_error("region", exc) from None
    try:
        pico = TierConfig(
            c["pico.tx_power_dBm"], c["pico.density"], c["pico.pilot_power_dBm"], c["pico.power_backoff_dB"]
        )
        macro = TierConfig(c["macro.tx_power_dBm"])
    except InvalidArgumentError as exc:
        raise _field_error("pico/macro", exc) from None
    try:
        policy = AssociationPolicy(
            c["policy.reb_bias_dB"], c["policy.hysteresis_dB"], c["policy.bias_mode"]
        )
    except InvalidArgumentError as exc:
        raise _field_error("policy", exc) from None
    macro_region = None
    if c["macro.r_min_m"] is not None or c["macro.r_max_m"] is not None:
        try:
            macro_region = AnnularRegion(
                c["macro.r_min_m"] or region.r_min, c["macro.r_max_m"] or region.r_max
            )
        except InvalidArgumentError as exc:
            raise _field_error("macro.r_min_m/macro.r_max_m", exc) from None
    try:
        return ScenarioSpec(
            kind=c["scenario.kind"],
            region=region,
            channel=ch,
            pico=pico,
            macro=macro,
            policy=policy,
            rho_th_dBm=c["rho_th_dBm"],
            abs_duty=c["abs_duty"],
            serving_pico_distance_m=c["serving.distance_m"],
            serving_distance_model=c["serving.distance_model"],
            macro_distance_model=c["macro.distance_model"],
            macro_distance_m=c["macro.distance_m"],
            macro_region=macro_region,
            abs_with_coordination=c["abs_with_coordination"],
            das_includes_target=c["das_includes_target"],
            order=c["cumulant_order"],
        )
    except SingularityError:
        raise
    except InvalidArgumentError as exc:
        raise ConfigError(f"scenario: {exc}") from None


def _received_power_ln(c: dict) -> tuple[LogNormalParams, AnnularRegion, float]:
    spec = build_scenario(c)
    if c["source"] == "macro":
        region, p = spec.macro_annulus, spec.macro.tx_power_dBm
    elif c["source"] == "pico":
        region, p = spec.region, spec.pico.tx_power_dBm
    else:
        raise ConfigError(f"source: must be 'pico' or 'macro', got {c['source']!r}")
    return ln_from_cumulants(single_tx_cumulants(region, p, spec.channel, spec.order)), region, p


def _point_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence([seed, *key]).generate_state(1, np.uint64)[0])


def _x_grid(c: dict) -> np.ndarray:
    if c["x_dBm.points"] < 2 or not c["x_dBm.stop"] > c["x_dBm.start"]:
        raise ConfigError("x_dBm: need stop > start and points >= 2")
    return np.linspace(c["x_dBm.start"], c["x_dBm.stop"], c["x_dBm.points"])


@dataclass(frozen=True)
class RunOptions:
    mode: str = "analytic"
    seed: int = 0
    mc_samples: int = 100_000
    quadrature_order: int | None = None
    sweep: SweepSpec | None = None
    workers: int = 1

    @property
    def analytic(self) -> bool:
        return self.mode in ("analytic", "both")

    @property
    def montecarlo(self) -> bool:
        return self.mode in ("montecarlo", "both")


def _distribution_rows(cfg: RunConfig, opts: RunOptions, curve: str):
    col = "ccdf" if curve == "ccdf" else "cdf"
    header = ["scenario", "x_dBm"]
    header += [f"{col}_analytic"] * opts.analytic + [f"{col}_mc"] * opts.montecarlo
    rows = []
    for i, (label, overrides) in enumerate(cfg.series):
        c = cfg.resolved(overrides)
        x_dbm = _x_grid(c)
        x_mw = 10.0 ** (x_dbm / 10.0)
        analytic = mc = None
        if curve == "ccdf":
            spec = build_scenario(c)
            if opts.analytic:
                analytic = ln_from_cumulants(build_link_budget(spec).interference_cumulants).sf(x_mw)
            if opts.montecarlo:
                sim = simulate_scenario(
                    SimConfig(spec, opts.mc_samples, _point_seed(opts.seed, i), opts.workers)
                )
                mc = sim.interference.sf(x_mw)
        else:
            ln, region, p = _received_power_ln(c)
            if opts.analytic:
                analytic = ln.cdf(x_mw)
            if opts.montecarlo:
                rng = np.random.default_rng(_point_seed(opts.seed, i))
                ch = build_channel(c)
                samples = sample_single_tx_power(region, p, ch, opts.mc_samples, rng)
                mc = np.searchsorted(np.sort(samples), x_mw, side="right") / samples.size
        for j, x in enumerate(x_dbm):
            row = [label, x]
            if analytic is not None:
                row.append(analytic[j])
            if mc is not None:
                row.append(mc[j])
            rows.append(row)
    return header, rows


def _metric_point(c: dict, curve: str, opts: RunOptions, seed: int) -> tuple[list, list]:
    order = opts.quadrature_order or c["quadrature_order"]
    analytic, mc = [], []
    if curve == "handover":
        spec = build_scenario(c)
        macro = ln_from_cumulants(macro_cumulants(spec))
        pico = ln_from_cumulants(serving_pico_cumulants(spec))
        if opts.analytic:
            analytic.append(handover_probability(macro, pico, spec.policy, order))
            if spec.policy.bias_mode == "multiplicative-linear":
                analytic.append(handover_probability_closed_form(macro, pico, spec.policy))
            else:
                analytic.append(math.nan)
        if opts.montecarlo:
            rng = np.random.default_rng(seed)
            mc.append(handover_probability_mc(macro, pico, spec.policy, max(opts.mc_samples, 10_000), rng).probability)
        return analytic, mc
    spec = build_scenario(c)
    if opts.analytic:
        sir = build_link_budget(spec).sir
        if curve == "outage":
            analytic.append(outage_probability(sir, c["gamma_th_dB"]))
        else:
            cap = CapacityConfig(c["bandwidth_Hz"], order)
            analytic.append(cap.bandwidth_Hz * spectral_efficiency(sir, order))
    if opts.montecarlo:
        sim = simulate_scenario(SimConfig(spec, opts.mc_samples, seed, opts.workers))
        if curve == "outage":
            mc.append(sim.outage_fraction(c["gamma_th_dB"]))
        else:
            mc.append(c["bandwidth_Hz"] * sim.spectral_efficiency())
    return analytic, mc


def _metric_rows(cfg: RunConfig, opts: RunOptions, curve: str):
    sweep = opts.sweep
    if sweep is None and cfg.base.get("sweep"):
        sweep = parse_sweep(cfg.base["sweep"])
    field = sweep.field if sweep else "point"
    values = sweep.values() if sweep else np.array([0.0])
    if curve == "handover":
        names_a = ["handover_analytic", "handover_closed_form"]
        names_m = ["handover_mc"]
    else:
        names_a, names_m = [f"{curve}_analytic"], [f"{curve}_mc"]
    header = ["scenario", field] + names_a * opts.analytic + names_m * opts.montecarlo
    rows = []
    for i, (label, overrides) in enumerate(cfg.series):
        for j, v in enumerate(values):
            point = dict(overrides)
            if sweep:
                kind = SCHEMA[sweep.field][0]
                point[sweep.field] = int(round(v)) if kind is int else float(v)
            c = cfg.resolved(point)
            a, m = _metric_point(c, curve, opts, _point_seed(opts.seed, i, j))
            rows.append([label, v] + a + m)
    return header, rows


def summary_table(cfg: RunConfig, opts: RunOptions) -> str:
    """Cumulants, fitted log-normal, outage and capacity for every series at its base point."""
    lines = [
        f"{'series':<14}{'kappa1':>12}{'kappa2':>12}{'kappa3':>12}{'kappa4':>12}"
        f"{'mu_dB':>9}{'sigma_dB':>9}{'outage':>9}{'C_bpsHz':>9}"
    ]
    for label, overrides in cfg.series:
        c = cfg.resolved(overrides)
        if c["curve"] == "cdf":
            ln, region, p = _received_power_ln(c)
            spec = build_scenario(c)
            kappa = single_tx_cumulants(region, p, spec.channel, 4)
            out = cap = "-"
        else:
            spec = build_scenario(c)
            lb = build_link_budget(spec)
            kappa = lb.interference_cumulants
            ln = lb.interference
            order = opts.quadrature_order or c["quadrature_order"]
            out = f"{outage_probability(lb.sir, c['gamma_th_dB']):9.4f}"
            cap = f"{spectral_efficiency(lb.sir, order):9.3f}"
        k = list(kappa) + [math.nan] * (4 - len(kappa))
        mu_db, sigma_db = ln.to_db()
        lines.append(
            f"{label:<14}{k[0]:12.4e}{k[1]:12.4e}{k[2]:12.4e}{k[3]:12.4e}"
            f"{mu_db:9.2f}{sigma_db:9.2f}{out:>9}{cap:>9}"
        )
    return "\n".join(lines)


def render_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else format(float(v), ".10g") for v in row])
    return buf.getvalue()


def run(cfg: RunConfig, opts: RunOptions) -> str:
    """Produce the CSV text for one run."""
    curve = cfg.base.get("curve", "outage")
    if curve in ("ccdf", "cdf"):
        if opts.sweep is not None:
            raise ConfigError(f"sweep: not supported for {curve} curves")
        header, rows = _distribution_rows(cfg, opts, curve)
    else:
        header, rows = _metric_rows(cfg, opts, curve)
    return render_csv(header, rows)


def recipe_names() -> list[str]:
    files = resources.files("hetnet_cumulants.recipes").iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".json"))


def recipe_text(name: str) -> str:
    path = resources.files("hetnet_cumulants.recipes") / f"{name}.json"
    if not path.is_file():
        raise ConfigError(f"recipe: unknown recipe {name!r}; choose from {recipe_names()}")
    return path.read_text(encoding="utf-8")


def list_recipes() -> str:
    lines = []
    for name in recipe_names():
        tree = json.loads(recipe_text(name))
        lines.append(f"{name}: {tree.get('notes', '')}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="analyze", description="Cumulant-based HetNet interference analysis and Monte Carlo check."
    )
    p.add_argument("--config", help="JSON scenario config")
    p.add_argument("--recipe", help="bundled reproduction recipe (see --list-recipes)")
    p.add_argument("--list-recipes", action="store_true", help="print bundled recipes and exit")
    p.add_argument("--mode", choices=("analytic", "montecarlo", "both"), default="analytic")
    p.add_argument("--output", help="CSV output path (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc-samples", type=int, default=100_000)
    p.add_argument("--sweep", help="FIELD=START:STOP:POINTS[:log]")
    p.add_argument("--quadrature-order", type=int)
    p.add_argument("--workers", type=int, default=1, help="Monte Carlo worker threads")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_recipes or (args.config is None and args.recipe is None):
        print(list_recipes())
        return 0
    try:
        if args.config and args.recipe:
            raise ConfigError("give either --config or --recipe, not both")
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = recipe_text(args.recipe)
        cfg = parse_config(text)
        if not 0 <= args.seed < 2**64:
            raise ConfigError("seed: must be an unsigned 64-bit integer")
        if args.mc_samples < 1:
            raise ConfigError("mc-samples: must be >= 1")
        if args.quadrature_order is not None and not 8 <= args.quadrature_order <= 128:
            raise ConfigError("quadrature-order: must lie in [8, 128]")
        opts = RunOptions(
            mode=args.mode,
            seed=args.seed,
            mc_samples=args.mc_samples,
            quadrature_order=args.quadrature_order,
            sweep=parse_sweep(args.sweep) if args.sweep else None,
            workers=args.workers,
        )
        text_out = run(cfg, opts)
        summary = summary_table(cfg, opts)
    except SingularityError as exc:
        print(f"error: numerical singularity: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text_out)
    else:
        sys.stdout.write(text_out)
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
