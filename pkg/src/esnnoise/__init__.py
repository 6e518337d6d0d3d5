"""Noise propagation through a linear echo state network.

Monte Carlo ensembles of noisy reservoir trajectories, closed-form variance
predictors for the memoryless cases, and a scenario runner that writes
CSV/SVG tables and plots of dispersion and SNR.
"""

__version__ = "0.1.0"

from .core import (Activation, ConstraintViolation, EsnParams, Explicit, NoiseSpec,
                   SignalSpec, SimulationConfig, Sine, UniformRandom, paper_defaults,
                   validate)
from .noise import NegativeVariance, NoiseStream, apply_noise, gaussian
from .topology import BandTooWide, ReservoirTopology, diagonal_blurred_matrix, uniform_matrix
from .dynamics import (DimensionMismatch, ReservoirState, Trajectory, esn_step, run_trajectory,
                       single_neuron_response)
from .stats import (EnsembleStats, GammaNotZero, ensemble, predict_variance_esn_no_memory,
                    predict_variance_single, sweep_alpha_input, sweep_gamma)
