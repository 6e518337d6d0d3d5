"""Monte Carlo ensemble statistics and closed-form variance predictors.

An ensemble runs K trials with the same input and fresh noise substreams
(trial ids ``0..K-1``), every trial starting from the zero reservoir state,
and reduces the outputs per time step to a mean, an unbiased variance
(the "dispersion") and the signed ratio ``mean / dispersion``.

Trials are split into fixed blocks of :data:`BLOCK_TRIALS` regardless of the
worker count, so the numbers do not depend on how many threads ran them.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (Activation, EsnParams, NoiseSpec, Sine, SignalSpec, SimulationConfig,
                   validate, validate_config)
from .dynamics import simulate_block, topology_for

BLOCK_TRIALS = 125


class GammaNotZero(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    mean: np.ndarray
    dispersion: np.ndarray
    snr: np.ndarray
    snr_defined: np.ndarray
    trials: int

    def __len__(self):
        return len(self.mean)


def variance_band(variance, trials: int):
    """Three standard errors of an unbiased variance estimate from ``trials`` samples."""
    return 3.0 * np.asarray(variance) * np.sqrt(2.0 / (trials - 1))


def summarize(outputs: np.ndarray) -> EnsembleStats:
    """Reduce a ``(K, T)`` array of trial outputs to per-step statistics."""
    outputs = np.asarray(outputs, dtype=np.float64)
    k = outputs.shape[0]
    if k < 2:
        raise ValueError("need at least two trials")
    # shift by the first trial so identical trials give exactly zero dispersion
    shifted = outputs - outputs[0]
    offset = shifted.mean(axis=0)
    mean = outputs[0] + offset
    dispersion = ((shifted - offset) ** 2).sum(axis=0) / (k - 1)
    defined = dispersion > 0
    snr = np.full_like(mean, np.nan)
    np.divide(mean, dispersion, out=snr, where=defined)
    return EnsembleStats(mean, dispersion, snr, defined, k)


def simulate_outputs(config: SimulationConfig, trials: int, seed: int = 0,
                     workers: int = 1) -> np.ndarray:
    """Raw outputs of ``trials`` independent noisy runs, shape ``(K, T - washout)``."""
    validate_config(config)
    inputs = config.signal.materialize()
    topology = topology_for(config)
    weights = None if topology is None else topology.matrix
    if config.noise.draws_per_step == 0:
        # deterministic system: every trial is the same trajectory
        one = simulate_block(inputs, config.params, weights, config.noise, seed, [0])
        return np.repeat(one, trials, axis=0)[:, config.washout:]
    ids = np.arange(trials)
    blocks = [ids[i:i + BLOCK_TRIALS] for i in range(0, trials, BLOCK_TRIALS)]

    def run(block):
        return simulate_block(inputs, config.params, weights, config.noise, seed, block)

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    return np.concatenate(parts, axis=0)[:, config.washout:]


def ensemble(config: SimulationConfig, trials: int, seed: int = 0,
             workers: int = 1) -> EnsembleStats:
    if trials < 2:
        raise ValueError(f"an ensemble needs K >= 2 trials, got {trials}")
    return summarize(simulate_outputs(config, trials, seed, workers))


def predict_variance_single(spec: NoiseSpec, activation: Activation, x_in: float) -> float:
    """Output variance of one noisy neuron: ``d_add + d_mul * (alpha * x)**2``."""
    var = 0.0
    if spec.additive_enabled:
        var += spec.d_add
    if spec.multiplicative_enabled:
        var += spec.d_mul * activation(x_in) ** 2
    return var


def predict_variance_esn_no_memory(spec: NoiseSpec, params: EsnParams, x_in: float) -> float:
    """Readout variance of a memoryless reservoir: the single-neuron value over N."""
    if params.gamma != 0:
        raise GammaNotZero(f"closed form needs gamma = 0, got {params.gamma}")
    return predict_variance_single(spec, params.activation, x_in) / params.n_reservoir


@dataclass(frozen=True)
class GammaSummary:
    gamma: float
    additive_level: float
    additive_level_se: float
    additive_batch_levels: Tuple[float, ...]
    mul_min: float
    mul_max: float


def default_transient(signal: SignalSpec) -> int:
    """One full sine period for sine inputs, nothing otherwise."""
    if isinstance(signal.variant, Sine):
        return int(np.ceil(signal.variant.period))
    return 0


def batch_levels(outputs: np.ndarray, batches: int) -> np.ndarray:
    """Time-averaged dispersion of each of ``batches`` equal trial groups."""
    k = outputs.shape[0] - outputs.shape[0] % batches
    groups = outputs[:k].reshape(batches, k // batches, -1)
    return np.array([summarize(g).dispersion.mean() for g in groups])


def sweep_gamma(config: SimulationConfig, gamma_grid: Sequence[float], trials: int,
                seed: int = 0, transient: Optional[int] = None, workers: int = 1,
                batches: int = 10) -> List[GammaSummary]:
    """Additive level and multiplicative range of the readout dispersion per gamma.

    All gammas share ``seed``, so neighbouring points are paired through
    common random numbers; ``additive_batch_levels`` exposes the pairing.
    """
    if transient is None:
        transient = default_transient(config.signal)
    if not 0 <= transient < config.signal.length:
        raise ValueError(f"transient={transient} outside [0, T)")
    summaries = []
    for gamma in gamma_grid:
        if not 0 <= gamma < 1:
            raise ValueError(f"gamma={gamma} outside [0, 1)")
        params = replace(config.params, beta=1.0 - gamma, gamma=gamma)
        add_cfg = config.replace(params=params, noise=config.noise.with_mode("additive"),
                                 washout=0)
        mul_cfg = add_cfg.replace(noise=config.noise.with_mode("multiplicative"))
        add_out = simulate_outputs(add_cfg, trials, seed, workers)[:, transient:]
        mul_disp = ensemble(mul_cfg, trials, seed, workers).dispersion[transient:]
        levels = batch_levels(add_out, batches)
        summaries.append(GammaSummary(
            gamma=float(gamma),
            additive_level=float(summarize(add_out).dispersion.mean()),
            additive_level_se=float(levels.std(ddof=1) / np.sqrt(batches)),
            additive_batch_levels=tuple(float(v) for v in levels),
            mul_min=float(mul_disp.min()),
            mul_max=float(mul_disp.max()),
        ))
    return summaries


@dataclass(frozen=True)
class AlphaInputCell:
    mode: str
    alpha: float
    x_in: float
    mean: float
    dispersion: float
    snr: float


def sweep_alpha_input(alphas: Sequence[float], xs: Sequence[float], spec: NoiseSpec,
                      trials: int, seed: int = 0, workers: int = 1,
                      modes: Sequence[str] = ("additive", "multiplicative", "mixed"),
                      ) -> List[AlphaInputCell]:
    """Single-neuron dispersion and SNR over an ``(alpha, x)`` grid for each noise mode.

    The neuron has no memory, so the x grid is fed as one input sequence and
    each step is an independent cell. Every cell reuses the same seed.
    """
    if len(alphas) == 0 or len(xs) == 0:
        raise ValueError("alpha and x grids must be non-empty")
    signal = SignalSpec.explicit(xs)
    cells = []
    for mode in modes:
        for alpha in alphas:
            config = SimulationConfig(
                noise=spec.with_mode(mode), signal=signal, model="neuron",
                params=EsnParams(n_reservoir=1, activation=Activation(alpha)))
            st = ensemble(config, trials, seed, workers)
            for x, m, d, s in zip(signal.materialize(), st.mean, st.dispersion, st.snr):
                cells.append(AlphaInputCell(mode, float(alpha), float(x), float(m),
                                            float(d), float(s)))
    return cells
