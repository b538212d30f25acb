"""Command-line front end: scenario sweeps with CSV output.

Scenarios fig2..fig8 reproduce the standard evaluation curves (signal and
interferer power CCDFs, coverage and rate versus transmit power or
association probability); `custom` evaluates one configuration on a
threshold grid.  Analytic and Monte Carlo columns are controlled by
--mode.  All defaults follow the baseline setup: 5 km disk window, 3 m
surface offset, exponent 2.5, -30 dB unit gains, -70 dBm noise, serving
link from (20, 0) with surface at (20, 3).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import analytic, mcsim
from .analytic import SystemParams
from .fading import FadingParams, PathLossParams, db_to_linear, dbm_to_watts
from .geometry import Window

__all__ = ["RunSpec", "main", "parse_config", "render_config", "build_params"]

MODES = ("analytic", "mc", "both")

#: config/flag keys with units and parser; every SystemParams field is here.
KEY_SPECS: dict[str, tuple[str, type]] = {
    "lambda_t": ("transmitters per m^2", float),
    "lambda_u": ("users per m^2 (accepted, unused by the expressions)", float),
    "p": ("surface association probability", float),
    "n_elements": ("reflecting elements per surface", int),
    "alpha": ("path-loss exponent", float),
    "c_d_db": ("direct unit-distance gain, dB", float),
    "c_r_db": ("reflected unit-distance gain, dB", float),
    "d0": ("transmitter-to-surface offset, m", float),
    "d_g0": ("fixed-association serving distance, m", float),
    "m_h": ("Nakagami shape, transmitter-to-surface hop", float),
    "m_r": ("Nakagami shape, surface-to-user hop", float),
    "p_tx_dbm": ("transmit power, dBm", float),
    "noise_dbm": ("noise power, dBm", float),
    "interference_limited": ("1 to drop the noise term", int),
    "gamma_bar_db": ("SINR threshold, dB", float),
    "window_radius": ("simulation window radius, m", float),
    "trials": ("Monte Carlo trials per point", int),
    "seed": ("Monte Carlo seed", int),
    "workers": ("parallel simulation workers", int),
    "pool_size": ("fading table rows", int),
    "strategy": ("custom scenario strategy: fixed_ris|fixed_noris|nearest|nearest_intlimited", str),
}

_RUN_KEYS = ("scenario", "mode", "out")

DEFAULTS: dict[str, object] = {
    "lambda_t": 1e-4,
    "lambda_u": 1e-4,
    "p": 0.5,
    "n_elements": 32,
    "alpha": 2.5,
    "c_d_db": -30.0,
    "c_r_db": -30.0,
    "d0": 3.0,
    "d_g0": 20.0,
    "m_h": 2.0,
    "m_r": 2.0,
    "p_tx_dbm": 0.0,
    "noise_dbm": -70.0,
    "interference_limited": 0,
    "gamma_bar_db": 0.0,
    "window_radius": 5000.0,
    "trials": 0,          # 0 = per-scenario default
    "seed": 1,
    "workers": 1,
    "pool_size": 1 << 20,
    "strategy": "fixed_ris",
}


@dataclass(frozen=True)
class RunSpec:
    """One run: scenario id, overrides onto the defaults, output, and mode."""

    scenario: str
    overrides: dict = field(default_factory=dict)
    out: str | None = None
    mode: str = "both"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; "
                             f"choose from {', '.join(sorted(SCENARIOS))}")
        for key in self.overrides:
            if key not in KEY_SPECS:
                raise ValueError(f"unknown config key {key!r}")

    def setting(self, key: str):
        return self.overrides.get(key, DEFAULTS[key])


def build_params(spec: RunSpec, **extra) -> SystemParams:
    """SystemParams from a run spec, with call-site keyword overrides."""
    get = lambda k: extra[k] if k in extra else spec.setting(k)
    return SystemParams(
        lambda_t=float(get("lambda_t")),
        p=float(get("p")),
        n_elements=int(get("n_elements")),
        path=PathLossParams(c_d=db_to_linear(float(get("c_d_db"))),
                            c_r=db_to_linear(float(get("c_r_db"))),
                            alpha=float(get("alpha")),
                            d0=float(get("d0"))),
        fading=FadingParams(m_h=float(get("m_h")), m_r=float(get("m_r"))),
        p_tx_w=dbm_to_watts(float(get("p_tx_dbm"))),
        noise_w=dbm_to_watts(float(get("noise_dbm"))),
        d_g0=float(get("d_g0")),
        interference_limited=bool(int(get("interference_limited"))),
        lambda_u=float(get("lambda_u")),
    )


def _mc_config(spec: RunSpec, params: SystemParams, default_trials: int,
               seed_offset: int = 0) -> mcsim.McConfig:
    trials = int(spec.setting("trials")) or default_trials
    return mcsim.McConfig(trials=trials,
                          seed=int(spec.setting("seed")) + seed_offset,
                          params=params,
                          window=Window(float(spec.setting("window_radius"))),
                          pool_size=int(spec.setting("pool_size")),
                          workers=int(spec.setting("workers")))


# ---------------------------------------------------------------------------
# Config file handling: flat "key = value" lines, '#' comments
# ---------------------------------------------------------------------------

def parse_config(text: str) -> RunSpec:
    scenario = "custom"
    mode = "both"
    out = None
    overrides: dict = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {ln}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "scenario":
            scenario = value
        elif key == "mode":
            mode = value
        elif key == "out":
            out = value
        elif key in KEY_SPECS:
            try:
                overrides[key] = KEY_SPECS[key][1](value)
            except ValueError as exc:
                raise ValueError(f"line {ln}: bad value for {key}: {exc}") from exc
        else:
            raise ValueError(f"line {ln}: unknown config key {key!r}")
    return RunSpec(scenario=scenario, overrides=overrides, out=out, mode=mode)


def render_config(spec: RunSpec) -> str:
    """Config text that parses back to an identical run."""
    lines = [f"scenario = {spec.scenario}", f"mode = {spec.mode}"]
    if spec.out is not None:
        lines.append(f"out = {spec.out}")
    for key in KEY_SPECS:
        if key in spec.overrides:
            lines.append(f"{key} = {spec.overrides[key]}  # {KEY_SPECS[key][0]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _crossing_db(x_db: np.ndarray, values: np.ndarray, level: float) -> float | None:
    """First dB abscissa where a monotone curve crosses the level."""
    for i in range(1, len(x_db)):
        lo, hi = values[i - 1], values[i]
        if (lo - level) * (hi - level) <= 0.0 and lo != hi:
            return float(x_db[i - 1] + (level - lo) * (x_db[i] - x_db[i - 1]) / (hi - lo))
    return None


def _scenario_fig2(spec: RunSpec):
    """Signal-power CCDF families over element counts and fading shapes."""
    rows, summaries = [], []
    x_db = np.arange(-65.0, -24.9, 0.5)
    x_lin = 10.0 ** (x_db / 10.0)
    do_mc = spec.mode in ("mc", "both")
    trials = int(spec.setting("trials")) or 200_000
    for m in (1.0, 2.0, 4.0):
        for n_el in (16, 32, 64):
            params = build_params(spec, m_h=m, m_r=m, n_elements=n_el)
            from .powerdist import signal_ccdf, signal_gamma_fit
            fit = signal_gamma_fit(params.eta_g0, params.eta_h0, params.fading, n_el)
            ana = np.array([signal_ccdf(fit, x) for x in x_lin])
            emp = np.full_like(ana, np.nan)
            if do_mc:
                dist = mcsim.sample_signal_power(params.eta_g0, params.eta_h0,
                                                 params.fading, n_el, trials,
                                                 int(spec.setting("seed")) + n_el + int(m))
                emp = dist.ccdf(x_lin)
            for i in range(len(x_db)):
                rows.append([n_el, m, x_db[i],
                             ana[i] if spec.mode != "mc" else "",
                             emp[i] if do_mc else ""])
            cross = _crossing_db(x_db, ana, 0.8)
            summaries.append(f"fig2 m={m:g} N={n_el}: analytic CCDF crosses 0.8 at "
                             f"{cross:.2f} dB" if cross else
                             f"fig2 m={m:g} N={n_el}: no 0.8 crossing on grid")
    return ["n_elements", "m", "x_db", "ccdf_analytic", "ccdf_mc"], rows, summaries


def _scenario_fig3(spec: RunSpec):
    """Per-interferer power CCDF against the exponential model."""
    rows, summaries = [], []
    x_db = np.arange(-60.0, -19.9, 0.5)
    x_lin = 10.0 ** (x_db / 10.0)
    do_mc = spec.mode in ("mc", "both")
    trials = int(spec.setting("trials")) or 200_000
    from .powerdist import interferer_exp_param
    for n_el in (16, 32, 64):
        params = build_params(spec, n_elements=n_el)
        d_g, d_r = params.d_g0, params.d_r0          # mirrored interferer geometry
        eta_g = params.path.c_d * d_g ** -params.path.alpha
        eta_h = params.path.c_r * (params.path.d0 * d_r) ** -params.path.alpha
        zeta = interferer_exp_param(eta_g, eta_h, n_el, True)
        model = np.exp(-zeta * x_lin)
        emp = np.full_like(model, np.nan)
        if do_mc:
            dist = mcsim.sample_interferer_power(eta_g, eta_h, params.fading, n_el,
                                                 trials, int(spec.setting("seed")) + n_el)
            emp = dist.ccdf(x_lin)
        for i in range(len(x_db)):
            rows.append([n_el, x_db[i],
                         model[i] if spec.mode != "mc" else "",
                         emp[i] if do_mc else ""])
        if do_mc:
            dev = float(np.nanmax(np.abs(model - emp)))
            summaries.append(f"fig3 N={n_el}: max |model - empirical| = {dev:.4f}")
        else:
            summaries.append(f"fig3 N={n_el}: exponential parameter {zeta:.6g}")
    return ["n_elements", "x_db", "ccdf_exp_model", "ccdf_mc"], rows, summaries


def _coverage_power_sweep(spec: RunSpec, with_ris: bool, lambdas, p_grid_dbm,
                          default_trials: int, label: str):
    rows, summaries = [], []
    gamma_bar = db_to_linear(float(spec.setting("gamma_bar_db")))
    do_mc = spec.mode in ("mc", "both")
    do_ana = spec.mode in ("analytic", "both")
    for lam in lambdas:
        ana_vals, mc_vals, mc_cis = [], [], []
        for k, p_dbm in enumerate(p_grid_dbm):
            params = build_params(spec, lambda_t=lam, p_tx_dbm=p_dbm)
            ana = mc = ci = ""
            if do_ana:
                ana = (analytic.coverage_fixed_ris(params, gamma_bar) if with_ris
                       else analytic.coverage_fixed_noris(params, gamma_bar))
                ana_vals.append(ana)
            if do_mc:
                cfg = _mc_config(spec, params, default_trials, seed_offset=k)
                dist = mcsim.simulate_sinr(cfg, "fixed", forced_ris=with_ris)
                mc, ci = mcsim.estimate_coverage(dist, gamma_bar)
                mc_vals.append(mc)
                mc_cis.append(ci)
            rows.append([p_dbm, lam, ana, mc, ci])
        if do_ana:
            cross = _crossing_db(np.asarray(p_grid_dbm), np.asarray(ana_vals), 0.9)
            summaries.append(f"{label} lambda_t={lam:g}: analytic coverage 0.9 at "
                             + (f"{cross:.2f} dBm" if cross is not None else "n/a"))
        if do_mc:
            summaries.append(f"{label} lambda_t={lam:g}: mc coverage "
                             f"{mc_vals[0]:.3f}..{mc_vals[-1]:.3f}")
    return ["p_dbm", "lambda_t", "coverage_analytic", "coverage_mc", "mc_ci"], rows, summaries


def _scenario_fig4(spec: RunSpec):
    return _coverage_power_sweep(spec, True, (1e-3, 1e-4, 1e-5, 0.0),
                                 np.arange(-40.0, 0.1, 2.0), 4000, "fig4")


def _scenario_fig5(spec: RunSpec):
    return _coverage_power_sweep(spec, False, (1e-4, 1e-5, 1e-6, 0.0),
                                 np.arange(-20.0, 30.1, 2.0), 4000, "fig5")


def _scenario_fig6(spec: RunSpec):
    rows, summaries = [], []
    p_grid = np.arange(-40.0, 0.1, 4.0)
    do_mc = spec.mode in ("mc", "both")
    do_ana = spec.mode in ("analytic", "both")
    for lam in (1e-6, 1e-5, 1e-4):
        for k, p_dbm in enumerate(p_grid):
            params = build_params(spec, lambda_t=lam, p_tx_dbm=p_dbm)
            ana = mc = ci = ""
            if do_ana:
                ana = analytic.rate_fixed(params, with_ris=True)
            if do_mc:
                cfg = _mc_config(spec, params, 4000, seed_offset=k)
                dist = mcsim.simulate_sinr(cfg, "fixed", forced_ris=True)
                mc, ci = mcsim.estimate_rate(dist)
            rows.append([p_dbm, lam, ana, mc, ci])
        summaries.append(f"fig6 lambda_t={lam:g}: done")
    return ["p_dbm", "lambda_t", "rate_analytic", "rate_mc", "mc_ci"], rows, summaries


def _scenario_fig7(spec: RunSpec):
    rows, summaries = [], []
    gamma_bar = db_to_linear(float(spec.setting("gamma_bar_db")))
    p_grid = np.arange(-40.0, 30.1, 2.0)
    do_mc = spec.mode in ("mc", "both")
    do_ana = spec.mode in ("analytic", "both")
    base = {"p": 0.9}
    families = [(lam, 2.5) for lam in (1e-5, 5e-5, 1e-4, 1e-3)] + [(1e-4, 4.0)]
    for lam, alpha in families:
        ana_tail = None
        for k, p_dbm in enumerate(p_grid):
            params = build_params(spec, lambda_t=lam, alpha=alpha, p_tx_dbm=p_dbm, **base)
            ana = mc = ci = ""
            if do_ana:
                ana = (analytic.coverage_nearest(params, gamma_bar) if alpha != 4.0
                       else analytic.coverage_nearest_alpha4(params, gamma_bar))
                ana_tail = ana
            if do_mc:
                cfg = _mc_config(spec, params, 2000, seed_offset=k)
                dist = mcsim.simulate_sinr(cfg, "nearest")
                mc, ci = mcsim.estimate_coverage(dist, gamma_bar)
            rows.append([p_dbm, lam, alpha, ana, mc, ci])
        summaries.append(f"fig7 lambda_t={lam:g} alpha={alpha:g}: "
                         f"high-power analytic coverage {ana_tail if ana_tail != '' else 'n/a'}")
    return ["p_dbm", "lambda_t", "alpha", "coverage_analytic", "coverage_mc", "mc_ci"], rows, summaries


def _scenario_fig8(spec: RunSpec):
    rows, summaries = [], []
    gamma_bar = db_to_linear(float(spec.setting("gamma_bar_db")))
    do_mc = spec.mode in ("mc", "both")
    do_ana = spec.mode in ("analytic", "both")
    for k, p_assoc in enumerate(np.arange(0.1, 0.91, 0.1)):
        params = build_params(spec, p=round(float(p_assoc), 3),
                              interference_limited=1)
        cov = rate = mc_cov = mc_rate = ci = ""
        if do_ana:
            cov = analytic.coverage_nearest_intlimited(params, gamma_bar)
            rate = analytic.rate_nearest(params, interference_limited=True)
        if do_mc:
            # simulate at a large but finite transmit SNR (gamma_t = 1e8)
            mc_params = replace(params, interference_limited=False,
                                p_tx_w=dbm_to_watts(10.0))
            cfg = _mc_config(spec, mc_params, 20_000, seed_offset=k)
            dist = mcsim.simulate_sinr(cfg, "nearest")
            mc_cov, ci = mcsim.estimate_coverage(dist, gamma_bar)
            mc_rate, _ = mcsim.estimate_rate(dist)
        rows.append([round(float(p_assoc), 3), cov, mc_cov, ci, rate, mc_rate])
    summaries.append("fig8: coverage and rate versus association probability "
                     "(noise-free analytics, gamma_t = 1e8 simulation)")
    return ["p", "coverage_analytic", "coverage_mc", "mc_ci",
            "rate_analytic", "rate_mc"], rows, summaries


def _scenario_custom(spec: RunSpec):
    rows, summaries = [], []
    params = build_params(spec)
    strategy = str(spec.setting("strategy"))
    grid = analytic.default_threshold_grid()
    do_mc = spec.mode in ("mc", "both")
    do_ana = spec.mode in ("analytic", "both")
    ana = [""] * len(grid)
    if do_ana:
        curve = analytic.evaluate_coverage_curve(params, grid, strategy)
        ana = list(curve.values)
    mc = [""] * len(grid)
    ci = [""] * len(grid)
    if do_mc:
        sim_strategy = "fixed" if strategy.startswith("fixed") else "nearest"
        forced = None
        if sim_strategy == "fixed":
            forced = strategy == "fixed_ris"
        cfg = _mc_config(spec, params, 20_000)
        dist = mcsim.simulate_sinr(cfg, sim_strategy, forced_ris=forced)
        pairs = [mcsim.estimate_coverage(dist, float(g)) for g in grid]
        mc = [p for p, _ in pairs]
        ci = [c for _, c in pairs]
    for i, g in enumerate(grid):
        rows.append([10.0 * math.log10(g), ana[i], mc[i], ci[i]])
    summaries.append(f"custom strategy={strategy}: evaluated "
                     f"{len(grid)} thresholds")
    return ["gamma_bar_db", "coverage_analytic", "coverage_mc", "mc_ci"], rows, summaries


SCENARIOS = {
    "fig2": _scenario_fig2,
    "fig3": _scenario_fig3,
    "fig4": _scenario_fig4,
    "fig5": _scenario_fig5,
    "fig6": _scenario_fig6,
    "fig7": _scenario_fig7,
    "fig8": _scenario_fig8,
    "custom": _scenario_custom,
}

_SCENARIO_HELP = {
    "fig2": "signal-power CCDF vs gamma fit, m x N families",
    "fig3": "per-interferer power CCDF vs exponential model",
    "fig4": "fixed association with surface: coverage vs transmit power",
    "fig5": "fixed association without surface: coverage vs transmit power",
    "fig6": "fixed association: rate vs transmit power",
    "fig7": "nearest association: coverage vs transmit power",
    "fig8": "nearest association, noise-free: coverage and rate vs p",
    "custom": "one configuration on the default threshold grid",
}


def run(spec: RunSpec) -> int:
    """Execute a run spec: write its CSV artifact and print curve summaries."""
    columns, rows, summaries = SCENARIOS[spec.scenario](spec)
    out = spec.out or f"{spec.scenario}.csv"
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    for line in summaries:
        print(line)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


# ---------------------------------------------------------------------------
# argparse wiring
# ---------------------------------------------------------------------------

def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    for key, (help_text, typ) in KEY_SPECS.items():
        parser.add_argument(f"--{key.replace('_', '-')}", dest=key, type=typ,
                            default=None, help=help_text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riscov",
        description="Coverage and rate toolkit for surface-assisted networks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write CSV output")
    p_run.add_argument("scenario", choices=sorted(SCENARIOS))
    p_run.add_argument("--mode", choices=MODES, default=None,
                       help="columns to compute (default both)")
    p_run.add_argument("--out", default=None, help="output CSV path")
    p_run.add_argument("--config", default=None, help="config file with key = value lines")
    _add_override_flags(p_run)

    p_val = sub.add_parser("validate-config", help="parse and validate a config file")
    p_val.add_argument("config", help="config file path")

    sub.add_parser("list-scenarios", help="list scenario ids")
    return parser


def _spec_from_args(args) -> RunSpec:
    if args.config:
        with open(args.config) as fh:
            spec = parse_config(fh.read())
        spec = replace(spec, scenario=args.scenario)
    else:
        spec = RunSpec(scenario=args.scenario)
    overrides = dict(spec.overrides)
    for key in KEY_SPECS:
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    mode = args.mode or spec.mode
    out = args.out or spec.out
    return RunSpec(scenario=args.scenario, overrides=overrides, out=out, mode=mode)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "list-scenarios":
            for name in sorted(SCENARIOS):
                print(f"{name:8s} {_SCENARIO_HELP[name]}")
            return 0
        if args.command == "validate-config":
            with open(args.config) as fh:
                spec = parse_config(fh.read())
            build_params(spec)          # unit/value validation
            sys.stdout.write(render_config(spec))
            print("config ok")
            return 0
        spec = _spec_from_args(args)
        build_params(spec)
        return run(spec)
    except (ValueError, OSError, analytic.QuadratureError,
            analytic.DivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
