"""Entanglement of two spins through the ground state of a shared bosonic bath."""

from .model import BathConfig, ConfigError, DiscreteBath, Mode, plane_wave_bath, validate
from .entangle import DensityMatrix4, concurrence, two_tangle
from .perturb import dressed_state, discrete_amplitude, discrete_tangle, energy_shift2, reduced_state
from .continuum import Amplitude, continuum_amplitude, tangle_continuum
from .edoracle import EDModel, ed_tangle
from .analysis import FitResult, claim_report, fit_exponent, window_sweep

__version__ = "0.1.0"
