"""Second-order dressed ground state of two spins sharing a discrete bath.

Coefficients are relative to the bare ground state |gg,0> (whose relative
amplitude is 1); ``c_gg`` is the real positive normalisation. Two-boson
amplitudes are full symmetric matrices ``M[k, q]`` multiplying
``1/2 sum_kq M[k, q] a_k^+ a_q^+ |0>``, so their norm is ``1/2 sum |M|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entangle import DensityMatrix4, EE, EG, GE, GG
from .model import DiscreteBath


@dataclass(frozen=True)
class DressedState2:
    c_gg: float
    c_ee: complex
    c_eg: np.ndarray
    c_ge: np.ndarray
    c_gg2: np.ndarray
    c_ee2: np.ndarray

    @property
    def unnormalised_norm2(self) -> float:
        return float(1.0 + np.sum(np.abs(self.c_eg) ** 2) + np.sum(np.abs(self.c_ge) ** 2)
                     + abs(self.c_ee) ** 2 + 0.5 * np.sum(np.abs(self.c_gg2) ** 2)
                     + 0.5 * np.sum(np.abs(self.c_ee2) ** 2))

    @property
    def norm2(self) -> float:
        """Squared norm of the normalised state (1 up to rounding)."""
        return self.c_gg**2 * self.unnormalised_norm2


def _denominators(bath: DiscreteBath) -> np.ndarray:
    d = bath.omega0 + bath.omega
    if np.any(d <= 0):
        raise ValueError("omega0 + omega_k must be positive")
    return 1.0 / d


def dressed_state(bath: DiscreteBath) -> DressedState2:
    """Expand the dressed-state recursion to second order in the couplings."""
    la, lb, w, w0 = bath.lambda_alpha, bath.lambda_beta, bath.omega, bath.omega0
    with np.errstate(over="raise", invalid="raise"):
        try:
            inv = _denominators(bath)
            # one boson, one spin flipped: energy denominator -(omega0 + omega_k)
            c_eg = -np.conj(la) * inv
            c_ge = -np.conj(lb) * inv
            # both flipped, no boson: paths via |eg,1k> and |ge,1k>, denominator -2 omega0
            c_ee = -(np.sum(c_eg * lb) + np.sum(c_ge * la)) / (2.0 * w0)
            wsum = w[:, None] + w[None, :]
            dsum = inv[:, None] + inv[None, :]
            cla, clb = np.conj(la), np.conj(lb)
            pair_gg = np.outer(cla, cla) + np.outer(clb, clb)
            pair_ee = np.outer(cla, clb) + np.outer(clb, cla)
            c_gg2 = pair_gg * dsum / wsum
            c_ee2 = pair_ee * dsum / (2.0 * w0 + wsum)
        except FloatingPointError as exc:
            raise OverflowError("dressed-state coefficients overflowed") from exc
    state = DressedState2(1.0, complex(c_ee), c_eg, c_ge, c_gg2, c_ee2)
    c_gg = 1.0 / np.sqrt(state.unnormalised_norm2)
    return DressedState2(float(c_gg), complex(c_ee), c_eg, c_ge, c_gg2, c_ee2)


def discrete_amplitude(bath: DiscreteBath) -> complex:
    """Mode sum of ``lambda_alpha * conj(lambda_beta) / (omega0 + omega_k)``."""
    return complex(np.sum(bath.lambda_alpha * np.conj(bath.lambda_beta) * _denominators(bath)))


def discrete_tangle(bath: DiscreteBath) -> float:
    return 4.0 / bath.omega0**2 * abs(discrete_amplitude(bath)) ** 2


def energy_shift2(bath: DiscreteBath) -> float:
    """Second-order ground-energy shift (never positive)."""
    s = (np.abs(bath.lambda_alpha) ** 2 + np.abs(bath.lambda_beta) ** 2) * _denominators(bath)
    return float(-np.sum(s))


def reduced_state(state: DressedState2) -> DensityMatrix4:
    """Two-spin state obtained by tracing the bosons out of the dressed state."""
    n2 = state.c_gg**2
    rho = np.zeros((4, 4), dtype=complex)
    rho[GG, GG] = 1.0 + 0.5 * np.sum(np.abs(state.c_gg2) ** 2)
    rho[EE, EE] = abs(state.c_ee) ** 2 + 0.5 * np.sum(np.abs(state.c_ee2) ** 2)
    rho[EG, EG] = np.sum(np.abs(state.c_eg) ** 2)
    rho[GE, GE] = np.sum(np.abs(state.c_ge) ** 2)
    rho[EG, GE] = np.sum(state.c_eg * np.conj(state.c_ge))
    rho[GE, EG] = np.conj(rho[EG, GE])
    rho[EE, GG] = state.c_ee + 0.5 * np.sum(state.c_ee2 * np.conj(state.c_gg2))
    rho[GG, EE] = np.conj(rho[EE, GG])
    rho *= n2
    # exact unit trace; the stored normalisation already gives it up to rounding
    rho /= np.real(np.trace(rho))
    return DensityMatrix4(rho)
