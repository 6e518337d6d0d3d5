"""Time stepping for the single noisy neuron and the linear echo state network.

The input weights are the all-ones row and the readout is the uniform
``1/N`` column; neither is stored as a matrix. Noise touches reservoir
neurons only.

Two paths exist. :func:`esn_step` advances one trajectory through explicit
:class:`~esnnoise.noise.NoiseStream` objects and is the readable reference.
:func:`simulate_block` advances a batch of trials at once with vectorised
noise and is what the ensemble code uses; both draw the same noise values.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import (Activation, EsnParams, NoiseSpec, SignalSpec, SimulationConfig,
                   validate, validate_config)
from .noise import NoiseStream, apply_noise, apply_noise_array, stream_keys
from .topology import ReservoirTopology, build_topology


class DimensionMismatch(ValueError):
    pass


@dataclass
class ReservoirState:
    y_prev: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, n: int) -> "ReservoirState":
        return cls(np.zeros(n), 0)


@dataclass
class Trajectory:
    outputs: np.ndarray
    params_snapshot: dict = field(default_factory=dict)


def single_neuron_response(x_in: float, activation: Activation, spec: NoiseSpec,
                           stream: NoiseStream) -> float:
    return apply_noise(activation(x_in), spec, stream)


def esn_step(state: ReservoirState, x_in_t: float, params: EsnParams,
             topology: ReservoirTopology, spec: NoiseSpec,
             streams: Sequence[NoiseStream]) -> Tuple[ReservoirState, float]:
    """Advance the reservoir by one step and return ``(new_state, x_out)``."""
    n = params.n_reservoir
    if len(state.y_prev) != n or topology.n != n or len(streams) != n:
        raise DimensionMismatch(
            f"state={len(state.y_prev)}, topology={topology.n}, "
            f"streams={len(streams)}, N={n}")
    pre = params.beta * x_in_t + params.gamma * (state.y_prev @ topology.matrix)
    x_res = params.activation(pre)
    y_res = np.array([apply_noise(x, spec, s) for x, s in zip(x_res, streams)])
    x_out = float(y_res @ np.full(n, 1.0 / n))
    return ReservoirState(y_res, state.t + 1), x_out


def simulate_block(inputs: np.ndarray, params: EsnParams, weights: Optional[np.ndarray],
                   spec: NoiseSpec, seed: int, trial_ids: np.ndarray) -> np.ndarray:
    """Outputs of several independent trials, shape ``(len(trial_ids), T)``.

    ``weights=None`` selects the isolated single neuron (stream neuron index
    0, no memory). Every trial starts from the zero reservoir state.
    """
    trial_ids = np.asarray(trial_ids, dtype=np.int64)
    inputs = np.asarray(inputs, dtype=np.float64)
    out = np.empty((len(trial_ids), len(inputs)))
    alpha = params.activation.slope
    if weights is None:
        keys = stream_keys(seed, trial_ids, 0)
        for t, u in enumerate(inputs):
            out[:, t] = apply_noise_array(np.full(len(trial_ids), alpha * u), spec, keys, t)
        return out

    n = params.n_reservoir
    if weights.shape != (n, n):
        raise DimensionMismatch(f"topology is {weights.shape}, N={n}")
    keys = stream_keys(seed, trial_ids[:, None], np.arange(n)[None, :])
    readout = np.full(n, 1.0 / n)
    y = np.zeros((len(trial_ids), n))
    for t, u in enumerate(inputs):
        pre = params.beta * u + params.gamma * (y @ weights)
        y = apply_noise_array(alpha * pre, spec, keys, t)
        out[:, t] = y @ readout
    return out


def config_snapshot(config: SimulationConfig) -> dict:
    snap = asdict(config)
    snap["signal"]["kind"] = config.signal.kind
    return snap


def topology_for(config: SimulationConfig) -> Optional[ReservoirTopology]:
    if config.model == "neuron":
        return None
    return build_topology(config.topology, config.params.n_reservoir, config.zeta, config.kernel)


def run_trajectory(signal: SignalSpec, params: EsnParams, topology: Optional[ReservoirTopology],
                   spec: NoiseSpec, seed: int, trial_id: int, washout: int = 0) -> Trajectory:
    """One noisy trajectory from the zero state; ``topology=None`` runs one neuron.

    The first ``washout`` outputs are dropped.
    """
    validate(params, spec)
    inputs = signal.materialize()
    weights = None if topology is None else topology.matrix
    outputs = simulate_block(inputs, params, weights, spec, seed, np.array([trial_id]))[0]
    config = SimulationConfig(
        noise=spec, params=params, signal=signal,
        model="neuron" if topology is None else "esn",
        topology=topology.kind if topology is not None else "uniform",
        zeta=(topology.zeta or 0) if topology is not None else 0,
        kernel=(topology.kernel or "symmetric") if topology is not None else "symmetric",
        washout=washout)
    snapshot = config_snapshot(config)
    snapshot.update(seed=seed, trial_id=trial_id)
    return Trajectory(outputs[washout:], snapshot)


def run_config(config: SimulationConfig, seed: int, trial_id: int) -> Trajectory:
    validate_config(config)
    return run_trajectory(config.signal, config.params, topology_for(config), config.noise,
                          seed, trial_id, config.washout)
