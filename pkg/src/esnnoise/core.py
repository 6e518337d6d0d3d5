"""Domain types, validation and the canonical default configuration.

Everything here is plain immutable data. The simulation modules accept
these objects and call :func:`validate` before doing any work.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Tuple, Union

import numpy as np

BETA_GAMMA_TOL = 1e-12

NOISE_MODES = ("additive", "multiplicative", "mixed", "none")


class ConstraintViolation(ValueError):
    """A configuration breaks one of the type invariants.

    ``invariant`` carries a short machine-readable name such as
    ``beta_gamma_sum`` or ``negative_variance``.
    """

    def __init__(self, invariant: str, message: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}" if message else invariant)


@dataclass(frozen=True)
class NoiseSpec:
    d_add: float = 1e-2
    d_mul: float = 1e-2
    additive_enabled: bool = True
    multiplicative_enabled: bool = True

    @property
    def draws_per_step(self) -> int:
        """Number of Gaussian draws one neuron consumes per time step."""
        return int(self.additive_enabled) + int(self.multiplicative_enabled)

    @property
    def mode(self) -> str:
        if self.additive_enabled and self.multiplicative_enabled:
            return "mixed"
        if self.additive_enabled:
            return "additive"
        if self.multiplicative_enabled:
            return "multiplicative"
        return "none"

    def with_mode(self, mode: str) -> "NoiseSpec":
        """Copy with the enable flags set for one of :data:`NOISE_MODES`."""
        if mode not in NOISE_MODES:
            raise ValueError(f"unknown noise mode {mode!r}")
        return replace(
            self,
            additive_enabled=mode in ("additive", "mixed"),
            multiplicative_enabled=mode in ("multiplicative", "mixed"),
        )


@dataclass(frozen=True)
class Activation:
    """Linear activation ``f(x) = slope * x``."""

    slope: float = 1.0

    def __call__(self, x):
        return self.slope * x


@dataclass(frozen=True)
class EsnParams:
    n_reservoir: int = 100
    beta: float = 1.0
    gamma: float = 0.0
    activation: Activation = field(default_factory=Activation)

    @classmethod
    def with_memory(cls, gamma: float, **kwargs) -> "EsnParams":
        """Build params with ``beta`` derived as ``1 - gamma``."""
        return cls(beta=1.0 - gamma, gamma=gamma, **kwargs)

    @property
    def alpha(self) -> float:
        return self.activation.slope


@dataclass(frozen=True)
class UniformRandom:
    lo: float = -1.0
    hi: float = 1.0


@dataclass(frozen=True)
class Sine:
    amplitude: float = 1.0
    period: float = 300.0
    phase: float = 0.0


@dataclass(frozen=True)
class Explicit:
    samples: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(float(s) for s in self.samples))


SignalVariant = Union[UniformRandom, Sine, Explicit]

# Sine input used wherever reservoir memory is switched on.
SINE_DEFAULT = Sine(amplitude=1.0, period=300.0, phase=0.0)
SINE_LENGTH = 600


@dataclass(frozen=True)
class SignalSpec:
    variant: SignalVariant = field(default_factory=UniformRandom)
    length: int = 200
    seed: int = 0

    @classmethod
    def explicit(cls, samples) -> "SignalSpec":
        samples = tuple(float(s) for s in samples)
        return cls(Explicit(samples), len(samples))

    @classmethod
    def sine(cls, amplitude: float = SINE_DEFAULT.amplitude,
             period: float = SINE_DEFAULT.period,
             phase: float = SINE_DEFAULT.phase,
             length: int = SINE_LENGTH) -> "SignalSpec":
        return cls(Sine(amplitude, period, phase), length)

    @property
    def kind(self) -> str:
        return {UniformRandom: "uniform", Sine: "sine", Explicit: "explicit"}[type(self.variant)]

    def materialize(self) -> np.ndarray:
        """Return the input sequence as a float64 array of shape ``(length,)``."""
        v = self.variant
        if isinstance(v, UniformRandom):
            rng = np.random.default_rng(self.seed)
            return rng.uniform(v.lo, v.hi, self.length)
        if isinstance(v, Sine):
            t = np.arange(self.length, dtype=np.float64)
            return v.amplitude * np.sin(2.0 * np.pi * t / v.period + v.phase)
        return np.array(v.samples, dtype=np.float64)


@dataclass(frozen=True)
class SimulationConfig:
    """Everything needed to run one ensemble.

    ``model`` is ``"esn"`` for the full reservoir or ``"neuron"`` for one
    isolated noisy neuron (topology and memory are then ignored).
    """

    noise: NoiseSpec = field(default_factory=NoiseSpec)
    params: EsnParams = field(default_factory=EsnParams)
    signal: SignalSpec = field(default_factory=SignalSpec)
    model: str = "esn"
    topology: str = "uniform"
    zeta: int = 2
    kernel: str = "symmetric"
    washout: int = 0

    def replace(self, **changes) -> "SimulationConfig":
        return replace(self, **changes)


def paper_defaults() -> Tuple[NoiseSpec, EsnParams, SignalSpec]:
    """Noise variances 1e-2, N=100, alpha=1, no memory, 200 uniform inputs in [-1, 1]."""
    return (
        NoiseSpec(d_add=1e-2, d_mul=1e-2, additive_enabled=True, multiplicative_enabled=True),
        EsnParams(n_reservoir=100, beta=1.0, gamma=0.0, activation=Activation(1.0)),
        SignalSpec(UniformRandom(-1.0, 1.0), length=200, seed=0),
    )


def validate(params: EsnParams, noise: NoiseSpec) -> Tuple[EsnParams, NoiseSpec]:
    """Return ``(params, noise)`` unchanged or raise :class:`ConstraintViolation`."""
    if noise.d_add < 0 or noise.d_mul < 0:
        raise ConstraintViolation(
            "negative_variance", f"d_add={noise.d_add}, d_mul={noise.d_mul}")
    if not np.isfinite(noise.d_add) or not np.isfinite(noise.d_mul):
        raise ConstraintViolation("finite_variance")
    if int(params.n_reservoir) != params.n_reservoir or params.n_reservoir < 1:
        raise ConstraintViolation("n_reservoir", f"N={params.n_reservoir} must be >= 1")
    if not 0.0 <= params.gamma <= 1.0:
        raise ConstraintViolation("gamma_range", f"gamma={params.gamma} not in [0, 1]")
    if not 0.0 <= params.beta <= 1.0:
        raise ConstraintViolation("beta_range", f"beta={params.beta} not in [0, 1]")
    if abs(params.beta + params.gamma - 1.0) > BETA_GAMMA_TOL:
        raise ConstraintViolation(
            "beta_gamma_sum", f"beta + gamma = {params.beta + params.gamma}, expected 1")
    if not np.isfinite(params.activation.slope):
        raise ConstraintViolation("activation_slope")
    return params, noise


def validate_signal(signal: SignalSpec) -> SignalSpec:
    if signal.length < 1:
        raise ConstraintViolation("signal_length", f"length={signal.length} must be >= 1")
    v = signal.variant
    if isinstance(v, UniformRandom) and not v.lo <= v.hi:
        raise ConstraintViolation("uniform_bounds", f"lo={v.lo} > hi={v.hi}")
    if isinstance(v, Sine) and not v.period > 0:
        raise ConstraintViolation("sine_period", f"period={v.period} must be > 0")
    if isinstance(v, Explicit) and len(v.samples) != signal.length:
        raise ConstraintViolation(
            "signal_length", f"{len(v.samples)} samples but length={signal.length}")
    return signal


def validate_config(config: SimulationConfig) -> SimulationConfig:
    validate(config.params, config.noise)
    validate_signal(config.signal)
    if config.model not in ("esn", "neuron"):
        raise ConstraintViolation("model", f"unknown model {config.model!r}")
    if config.topology not in ("uniform", "diagonal"):
        raise ConstraintViolation("topology", f"unknown topology {config.topology!r}")
    if config.kernel not in ("symmetric", "literal"):
        raise ConstraintViolation("kernel", f"unknown kernel {config.kernel!r}")
    if config.zeta < 0:
        raise ConstraintViolation("zeta", "zeta must be >= 0")
    if not 0 <= config.washout < config.signal.length:
        raise ConstraintViolation("washout", f"washout={config.washout} outside [0, T)")
    return config
