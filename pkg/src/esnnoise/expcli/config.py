"""Flat ``key = value`` configuration files.

Lines are ``key = value``; ``#`` starts a comment; blank lines are ignored.
Lists are comma separated. Resolution order is: built-in defaults, then the
scenario's own defaults, then user overrides. If ``gamma`` is set and
``beta`` is not, ``beta`` becomes ``1 - gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..core import (Activation, EsnParams, Explicit, NoiseSpec, Sine, SignalSpec,
                    SimulationConfig, UniformRandom, paper_defaults, SINE_DEFAULT,
                    SINE_LENGTH, validate, validate_signal, ConstraintViolation)


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnknownKey(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self):
        return f"unknown configuration key {self.name!r}"


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        text = text.strip()
        if text not in options:
            raise ValueError(f"{text!r} is not one of {', '.join(options)}")
        return text
    return parse


def _float_list(text: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _int_list(text: str) -> Tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _optional_int(text: str) -> Optional[int]:
    return None if text.strip() == "auto" else int(text)


def _optional_floats(text: str) -> Optional[Tuple[float, ...]]:
    return None if text.strip() in ("", "none", "auto") else _float_list(text)


_noise, _params, _signal = paper_defaults()

PARSERS: Dict[str, Callable[[str], object]] = {
    "n_reservoir": int,
    "alpha": float,
    "beta": float,
    "gamma": float,
    "d_add": float,
    "d_mul": float,
    "additive": _bool,
    "multiplicative": _bool,
    "signal_lo": float,
    "signal_hi": float,
    "signal_length": int,
    "signal_seed": int,
    "samples": _optional_floats,
    "sine_amplitude": float,
    "sine_period": float,
    "sine_phase": float,
    "sine_length": int,
    "topology": _choice("uniform", "diagonal"),
    "zeta": int,
    "kernel": _choice("symmetric", "literal"),
    "washout": int,
    "transient": _optional_int,
    "seed": int,
    "trials": int,
    "workers": int,
    "gamma_grid": _float_list,
    "alpha_grid": _float_list,
    "x_grid": _float_list,
    "zeta_grid": _int_list,
}

DEFAULTS: Dict[str, object] = {
    "n_reservoir": _params.n_reservoir,
    "alpha": _params.activation.slope,
    "beta": _params.beta,
    "gamma": _params.gamma,
    "d_add": _noise.d_add,
    "d_mul": _noise.d_mul,
    "additive": _noise.additive_enabled,
    "multiplicative": _noise.multiplicative_enabled,
    "signal_lo": _signal.variant.lo,
    "signal_hi": _signal.variant.hi,
    "signal_length": _signal.length,
    "signal_seed": _signal.seed,
    "samples": None,
    "sine_amplitude": SINE_DEFAULT.amplitude,
    "sine_period": SINE_DEFAULT.period,
    "sine_phase": SINE_DEFAULT.phase,
    "sine_length": SINE_LENGTH,
    "topology": "uniform",
    "zeta": 2,
    "kernel": "symmetric",
    "washout": 0,
    "transient": None,
    "seed": 0,
    "trials": 1000,
    "workers": 1,
    "gamma_grid": (0.0, 0.2, 0.4, 0.6, 0.8, 0.9),
    "alpha_grid": (0.5, 1.0, 1.5, 2.0),
    "x_grid": tuple(float(v) for v in np.round(np.linspace(-1.0, 1.0, 21), 12)),
    "zeta_grid": (2, 20),
}
assert DEFAULTS.keys() == PARSERS.keys()


def format_value(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    if isinstance(value, tuple):
        return ", ".join(format_value(v) for v in value)
    return str(value)


def parse_lines(text: str) -> Dict[str, str]:
    """Raw ``{key: value_text}`` from a config document; rejects unknown keys."""
    raw: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(lineno, f"expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ParseError(lineno, "missing key")
        if key not in PARSERS:
            raise UnknownKey(key)
        try:
            PARSERS[key](value)
        except ValueError as exc:
            raise ParseError(lineno, f"bad value for {key}: {exc}") from None
        raw[key] = value
    return raw


def parse_overrides(overrides: Mapping[str, object]) -> Dict[str, object]:
    """Typed values for a ``{key: text-or-value}`` map."""
    typed = {}
    for key, value in overrides.items():
        if key not in PARSERS:
            raise UnknownKey(key)
        typed[key] = PARSERS[key](value) if isinstance(value, str) else value
    return typed


@dataclass(frozen=True)
class RunConfig:
    """Resolved flat parameter map plus the objects built from it."""

    values: Mapping[str, object]
    noise: NoiseSpec
    params: EsnParams
    random_signal: SignalSpec
    sine_signal: SignalSpec

    def __getattr__(self, name):
        try:
            return self.values[name]
        except KeyError:
            raise AttributeError(name) from None

    def simulation(self, signal: SignalSpec, **changes) -> SimulationConfig:
        base = SimulationConfig(
            noise=self.noise, params=self.params, signal=signal,
            topology=self.values["topology"], zeta=self.values["zeta"],
            kernel=self.values["kernel"], washout=self.values["washout"])
        return base.replace(**changes)

    def items(self) -> List[Tuple[str, str]]:
        return [(k, format_value(self.values[k])) for k in PARSERS]


def resolve(*layers: Mapping[str, object]) -> RunConfig:
    """Merge override layers over :data:`DEFAULTS` and validate the result."""
    values = dict(DEFAULTS)
    explicit = set()
    for layer in layers:
        typed = parse_overrides(layer)
        values.update(typed)
        explicit.update(typed)
    if "gamma" in explicit and "beta" not in explicit:
        values["beta"] = 1.0 - values["gamma"]

    noise = NoiseSpec(values["d_add"], values["d_mul"], values["additive"],
                      values["multiplicative"])
    params = EsnParams(values["n_reservoir"], values["beta"], values["gamma"],
                       Activation(values["alpha"]))
    validate(params, noise)
    if values["samples"] is not None:
        random_signal = SignalSpec.explicit(values["samples"])
    else:
        random_signal = SignalSpec(UniformRandom(values["signal_lo"], values["signal_hi"]),
                                   values["signal_length"], values["signal_seed"])
    sine_signal = SignalSpec(
        Sine(values["sine_amplitude"], values["sine_period"], values["sine_phase"]),
        values["sine_length"])
    validate_signal(random_signal)
    validate_signal(sine_signal)
    for key in ("trials",):
        if values[key] < 2:
            raise ConstraintViolation(key, f"{key}={values[key]} must be >= 2")
    if values["workers"] < 1:
        raise ConstraintViolation("workers", "workers must be >= 1")
    for g in values["gamma_grid"]:
        if not 0.0 <= g < 1.0:
            raise ConstraintViolation("gamma_range", f"gamma grid value {g} not in [0, 1)")
    return RunConfig(values, noise, params, random_signal, sine_signal)


def load_config(path, *layers: Mapping[str, object]) -> RunConfig:
    """Read a config file; ``layers`` are applied underneath the file's keys."""
    with open(path) as fh:
        raw = parse_lines(fh.read())
    return resolve(*layers, raw)
