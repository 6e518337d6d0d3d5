"""Scenario catalogue: one runner per experiment family.

Each runner turns a resolved :class:`RunConfig` into panels. A panel is one
CSV table plus one SVG chart sharing a file stem. Every run also writes a
``<scenario>_manifest.csv`` holding the fully resolved parameters; feeding
that manifest back through :func:`replay` reproduces the CSVs bit for bit.
"""

from __future__ import annotations

import csv
import logging
import os
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Sequence

import numpy as np

from .. import __version__
from ..core import Activation, EsnParams, SignalSpec
from ..stats import ensemble, sweep_alpha_input, sweep_gamma
from ..topology import build_topology
from .config import RunConfig, resolve
from .emit import Series, emit_csv, emit_svg

log = logging.getLogger(__name__)

POINT_COLUMNS = ["mode", "alpha", "gamma", "zeta", "t", "x_in", "mean", "dispersion", "snr"]
SWEEP_COLUMNS = ["gamma", "additive_level", "mul_min", "mul_max"]
NEURON_MODES = ("additive", "multiplicative", "mixed")
ESN_MODES = ("additive", "multiplicative")


@dataclass
class Panel:
    stem: str
    rows: List[dict]
    columns: Sequence[str]
    series: List[Series]
    axes: Dict[str, str]


@dataclass
class Scenario:
    name: str
    overrides: Mapping[str, object] = field(default_factory=dict)


def _point_rows(mode, alpha, gamma, zeta, inputs, stats):
    return [
        {"mode": mode, "alpha": alpha, "gamma": gamma, "zeta": zeta, "t": t,
         "x_in": float(x), "mean": float(m), "dispersion": float(d), "snr": float(s)}
        for t, (x, m, d, s) in enumerate(zip(inputs, stats.mean, stats.dispersion, stats.snr))
    ]


def _one_neuron(cfg: RunConfig) -> List[Panel]:
    signal = cfg.random_signal
    inputs = signal.materialize()
    rows, disp, snr = [], [], []
    for mode in NEURON_MODES:
        sim = cfg.simulation(signal, model="neuron", noise=cfg.noise.with_mode(mode),
                             washout=0)
        st = ensemble(sim, cfg.trials, cfg.seed, cfg.workers)
        rows += _point_rows(mode, cfg.alpha, None, None, inputs, st)
        disp.append(Series(mode, st.mean, st.dispersion, "scatter"))
        snr.append(Series(mode, st.mean, st.snr, "scatter"))
    return [
        Panel("one_neuron_dispersion", rows, POINT_COLUMNS, disp,
              {"xlabel": "mean output", "ylabel": "dispersion", "title": "one neuron"}),
        Panel("one_neuron_snr", rows, POINT_COLUMNS, snr,
              {"xlabel": "mean output", "ylabel": "SNR = mean / dispersion",
               "title": "one neuron"}),
    ]


def _one_neuron_alpha_sweep(cfg: RunConfig) -> List[Panel]:
    cells = sweep_alpha_input(cfg.alpha_grid, cfg.x_grid, cfg.noise, cfg.trials,
                              cfg.seed, cfg.workers)
    panels = []
    for mode in NEURON_MODES:
        mine = [c for c in cells if c.mode == mode]
        rows = [{"mode": c.mode, "alpha": c.alpha, "gamma": None, "zeta": None, "t": None,
                 "x_in": c.x_in, "mean": c.mean, "dispersion": c.dispersion, "snr": c.snr}
                for c in mine]
        for quantity in ("dispersion", "snr"):
            series = [Series(f"alpha={a:g}", [c.x_in for c in mine if c.alpha == a],
                             [getattr(c, quantity) for c in mine if c.alpha == a])
                      for a in cfg.alpha_grid]
            panels.append(Panel(f"one_neuron_alpha_sweep_{mode}_{quantity}", rows,
                                POINT_COLUMNS, series,
                                {"xlabel": "x_in", "ylabel": quantity, "title": mode}))
    return panels


def _esn_uniform(cfg: RunConfig) -> List[Panel]:
    panels = []
    for gamma in cfg.gamma_grid:
        params = EsnParams(cfg.n_reservoir, 1.0 - gamma, gamma, Activation(cfg.alpha))
        signal = cfg.random_signal if gamma == 0 else cfg.sine_signal
        kind = "random" if gamma == 0 else "sine"
        inputs = signal.materialize()[cfg.washout:]
        for mode in ESN_MODES:
            sim = cfg.simulation(signal, params=params, topology="uniform",
                                 noise=cfg.noise.with_mode(mode))
            st = ensemble(sim, cfg.trials, cfg.seed, cfg.workers)
            rows = _point_rows(mode, cfg.alpha, gamma, None, inputs, st)
            if kind == "random":
                series = [Series(mode, st.mean, st.dispersion, "scatter")]
                axes = {"xlabel": "mean output", "ylabel": "dispersion"}
            else:
                series = [Series(mode, np.arange(len(st.mean)), st.dispersion)]
                axes = {"xlabel": "t", "ylabel": "dispersion"}
            axes["title"] = f"uniform W_res, gamma={gamma:g}, {kind} input, {mode}"
            panels.append(Panel(f"esn_uniform_gamma{gamma:g}_{kind}_{mode}", rows,
                                POINT_COLUMNS, series, axes))
    sine = cfg.sine_signal.materialize()
    rows = [{"t": t, "x_in": float(x)} for t, x in enumerate(sine)]
    panels.append(Panel("esn_uniform_sine_input", rows, ["t", "x_in"],
                        [Series("x_in", np.arange(len(sine)), sine)],
                        {"xlabel": "t", "ylabel": "x_in", "title": "sine input"}))
    return panels


def _sweep_panel(stem, cfg, summaries, title):
    rows = [{"gamma": s.gamma, "additive_level": s.additive_level,
             "mul_min": s.mul_min, "mul_max": s.mul_max} for s in summaries]
    g = [s.gamma for s in summaries]
    series = [Series("additive (time mean)", g, [s.additive_level for s in summaries]),
              Series("multiplicative min", g, [s.mul_min for s in summaries]),
              Series("multiplicative max", g, [s.mul_max for s in summaries])]
    return Panel(stem, rows, SWEEP_COLUMNS, series,
                 {"xlabel": "gamma", "ylabel": "dispersion", "title": title})


def _esn_gamma_sweep(cfg: RunConfig) -> List[Panel]:
    sim = cfg.simulation(cfg.sine_signal, topology="uniform")
    summaries = sweep_gamma(sim, cfg.gamma_grid, cfg.trials, cfg.seed, cfg.transient,
                            cfg.workers)
    return [_sweep_panel("esn_gamma_sweep", cfg, summaries, "uniform W_res")]


def _esn_diagonal(cfg: RunConfig) -> List[Panel]:
    panels = []
    signal = cfg.sine_signal
    inputs = signal.materialize()[cfg.washout:]
    for zeta in cfg.zeta_grid:
        topo = build_topology("diagonal", cfg.n_reservoir, zeta, cfg.kernel)
        rows = [{"row": i, **{f"c{k}": float(v) for k, v in enumerate(r)}}
                for i, r in enumerate(topo.matrix)]
        panels.append(Panel(
            f"esn_diagonal_zeta{zeta}_matrix", rows, list(rows[0].keys()),
            [Series("centre row", np.arange(cfg.n_reservoir),
                    topo.matrix[cfg.n_reservoir // 2])],
            {"xlabel": "target neuron", "ylabel": "weight",
             "title": f"W_res row, zeta={zeta}, {cfg.kernel} kernel"}))
        for mode in ESN_MODES:
            sim = cfg.simulation(signal, topology="diagonal", zeta=zeta,
                                 noise=cfg.noise.with_mode(mode))
            st = ensemble(sim, cfg.trials, cfg.seed, cfg.workers)
            panels.append(Panel(
                f"esn_diagonal_zeta{zeta}_{mode}",
                _point_rows(mode, cfg.alpha, cfg.gamma, zeta, inputs, st), POINT_COLUMNS,
                [Series(mode, np.arange(len(st.mean)), st.dispersion)],
                {"xlabel": "t", "ylabel": "dispersion",
                 "title": f"diagonal W_res, zeta={zeta}, gamma={cfg.gamma:g}"}))
    return panels


def _esn_zeta_compare(cfg: RunConfig) -> List[Panel]:
    panels = []
    for zeta in cfg.zeta_grid:
        sim = cfg.simulation(cfg.sine_signal, topology="diagonal", zeta=zeta)
        summaries = sweep_gamma(sim, cfg.gamma_grid, cfg.trials, cfg.seed, cfg.transient,
                                cfg.workers)
        panels.append(_sweep_panel(f"esn_zeta_compare_zeta{zeta}", cfg, summaries,
                                   f"diagonal W_res, zeta={zeta}"))
    return panels


RUNNERS: Dict[str, Callable[[RunConfig], List[Panel]]] = {
    "one_neuron": _one_neuron,
    "one_neuron_alpha_sweep": _one_neuron_alpha_sweep,
    "esn_uniform": _esn_uniform,
    "esn_gamma_sweep": _esn_gamma_sweep,
    "esn_diagonal": _esn_diagonal,
    "esn_zeta_compare": _esn_zeta_compare,
}

# Scenario-specific parameters, applied between built-in defaults and user overrides.
SCENARIO_DEFAULTS: Dict[str, Dict[str, object]] = {
    "one_neuron": {},
    "one_neuron_alpha_sweep": {},
    "esn_uniform": {"gamma_grid": (0.0, 0.5)},
    "esn_gamma_sweep": {"topology": "uniform"},
    "esn_diagonal": {"gamma": 0.8, "topology": "diagonal"},
    "esn_zeta_compare": {"topology": "diagonal"},
}

DESCRIPTIONS = {
    "one_neuron": "one neuron, dispersion and SNR against mean output",
    "one_neuron_alpha_sweep": "one neuron over an (alpha, x_in) grid",
    "esn_uniform": "uniform reservoir without and with memory",
    "esn_gamma_sweep": "uniform reservoir, dispersion against gamma",
    "esn_diagonal": "diagonal reservoirs at fixed gamma",
    "esn_zeta_compare": "diagonal reservoirs, dispersion against gamma per zeta",
}


def resolve_scenario(scenario: Scenario) -> RunConfig:
    if scenario.name not in RUNNERS:
        raise ValueError(f"unknown scenario {scenario.name!r}; "
                         f"choose from {', '.join(RUNNERS)}")
    return resolve(SCENARIO_DEFAULTS[scenario.name], scenario.overrides)


def write_manifest(path, scenario: str, cfg: RunConfig) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerow(["scenario", scenario])
        writer.writerow(["code_version", __version__])
        writer.writerows(cfg.items())


def read_manifest(path) -> Scenario:
    with open(path, newline="") as fh:
        pairs = {row["key"]: row["value"] for row in csv.DictReader(fh)}
    name = pairs.pop("scenario")
    version = pairs.pop("code_version", None)
    if version != __version__:
        log.warning("manifest written by version %s, running %s", version, __version__)
    return Scenario(name, pairs)


def run_scenario(scenario: Scenario, seed: int, out_dir, emit: str = "both") -> List[str]:
    """Run one scenario and return the paths it wrote (manifest last)."""
    if emit not in ("csv", "svg", "both"):
        raise ValueError(f"emit must be csv, svg or both, got {emit!r}")
    cfg = resolve_scenario(Scenario(scenario.name, {**scenario.overrides, "seed": seed}))
    log.info("running %s (%s), seed=%d, trials=%d", scenario.name, DESCRIPTIONS[scenario.name],
             cfg.seed, cfg.trials)
    panels = RUNNERS[scenario.name](cfg)
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for panel in panels:
        stem = os.path.join(out_dir, panel.stem)
        if emit in ("csv", "both"):
            paths.append(emit_csv(panel.rows, stem + ".csv", panel.columns))
        if emit in ("svg", "both"):
            paths.append(emit_svg(panel.series, panel.axes, stem + ".svg"))
    manifest = os.path.join(out_dir, f"{scenario.name}_manifest.csv")
    write_manifest(manifest, scenario.name, cfg)
    paths.append(manifest)
    return paths


def replay(manifest_path, out_dir, emit: str = "both",
           overrides: Mapping[str, object] = None) -> List[str]:
    """Re-run the scenario recorded in a manifest; ``overrides`` may change e.g. workers."""
    scenario = read_manifest(manifest_path)
    values = {**scenario.overrides, **(overrides or {})}
    seed = int(values.pop("seed"))
    return run_scenario(Scenario(scenario.name, values), seed, out_dir, emit)
