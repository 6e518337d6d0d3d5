"""Reservoir connection matrices.

Orientation: ``matrix[i, k]`` is the weight from source neuron ``i`` to
target neuron ``k``, so a row vector of reservoir outputs is propagated as
``y @ matrix``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

KERNELS = ("symmetric", "literal")


class BandTooWide(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ReservoirTopology:
    kind: str
    matrix: np.ndarray
    zeta: Optional[int] = None
    kernel: Optional[str] = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def to_csv(self, path) -> None:
        """Write the dense matrix row-major, 17 significant digits, no header."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for row in self.matrix:
                writer.writerow(["%.17g" % v for v in row])


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix.setflags(write=False)
    return matrix


def uniform_matrix(n: int) -> ReservoirTopology:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return ReservoirTopology("uniform", _frozen(np.full((n, n), 1.0 / n)))


def kernel_weights(zeta: int, kernel: str = "symmetric") -> np.ndarray:
    """Unnormalised weights at offsets ``-zeta..zeta``.

    ``symmetric`` is the Gaussian ``exp(-(d/zeta)**2)``; ``literal`` keeps
    the one-sided exponent ``exp(-d/zeta**2)`` for comparison runs.
    """
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}, expected one of {KERNELS}")
    if zeta == 0:
        return np.ones(1)
    d = np.arange(-zeta, zeta + 1, dtype=np.float64)
    if kernel == "symmetric":
        return np.exp(-((d / zeta) ** 2))
    return np.exp(-(d / zeta ** 2))


def diagonal_blurred_matrix(n: int, zeta: int, kernel: str = "symmetric") -> ReservoirTopology:
    """Circulant band matrix with Gaussian-weighted offsets around the diagonal.

    Indices wrap around, so every row and every column holds the same set of
    normalised weights and both sums are one.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if int(zeta) != zeta or zeta < 0:
        raise ValueError(f"zeta must be a non-negative integer, got {zeta}")
    zeta = int(zeta)
    if zeta > 0 and 2 * zeta + 1 > n:
        raise BandTooWide(f"band width 2*zeta+1={2 * zeta + 1} exceeds n={n}")
    w = kernel_weights(zeta, kernel)
    w = w / w.sum()
    matrix = np.zeros((n, n))
    rows = np.arange(n)
    for d, weight in zip(range(-zeta, zeta + 1), w):
        matrix[rows, (rows + d) % n] = weight
    return ReservoirTopology("diagonal", _frozen(matrix), zeta=zeta, kernel=kernel)


def build_topology(kind: str, n: int, zeta: int = 2, kernel: str = "symmetric") -> ReservoirTopology:
    if kind == "uniform":
        return uniform_matrix(n)
    if kind == "diagonal":
        return diagonal_blurred_matrix(n, zeta, kernel)
    raise ValueError(f"unknown topology {kind!r}")
