"""Bath configurations, discrete baths and the plane-wave coupling law.

Units: hbar = 1 and unit propagation velocity, so a mode of wave-vector k has
frequency |k| and the spin splitting equals the resonance wavenumber k0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class ConfigError(ValueError):
    """A bath configuration violates one of its invariants."""


@dataclass(frozen=True)
class BathConfig:
    """Continuum bath: dimension, coupling dispersion exponent and scales."""

    dimension: int
    nu: float
    k0: float = 1.0
    kc: float = 1000.0
    g: float = 1.0

    @property
    def n(self) -> int:
        """Integer power ``2 nu`` (only meaningful when it is an integer)."""
        return int(round(2 * self.nu))


def validate(config: BathConfig) -> None:
    """Raise ``ConfigError`` naming the first violated invariant."""
    if config.dimension not in (1, 2, 3):
        raise ConfigError(f"dimension must be 1, 2 or 3 (got {config.dimension})")
    if not config.nu >= 0 or not math.isfinite(config.nu):
        raise ConfigError(f"nu must be finite and >= 0 (got {config.nu})")
    if not config.k0 > 0 or not math.isfinite(config.k0):
        raise ConfigError(f"k0 must be finite and > 0 (got {config.k0})")
    if not config.kc > config.k0:
        raise ConfigError(f"kc <= k0 ({config.kc} <= {config.k0})")
    if config.g < 0 or not math.isfinite(config.g):
        raise ConfigError(f"g must be finite and >= 0 (got {config.g})")
    if config.dimension == 1 and abs(2 * config.nu - round(2 * config.nu)) > 1e-12:
        raise ConfigError("2nu must be integer in d=1")


@dataclass(frozen=True)
class Mode:
    omega: float
    lambda_alpha: complex
    lambda_beta: complex

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"mode frequency must be > 0 (got {self.omega})")


@dataclass(frozen=True)
class DiscreteBath:
    """Finite set of modes seen by two spins with splitting ``omega0``.

    Stored column-wise; ``modes`` gives the per-mode view.
    """

    omega0: float
    omega: np.ndarray
    lambda_alpha: np.ndarray
    lambda_beta: np.ndarray

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float, ndmin=1)
        la = np.array(self.lambda_alpha, dtype=complex, ndmin=1)
        lb = np.array(self.lambda_beta, dtype=complex, ndmin=1)
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be > 0 (got {self.omega0})")
        if not (omega.shape == la.shape == lb.shape) or omega.ndim != 1:
            raise ValueError("omega and couplings must be 1-d arrays of equal length")
        if np.any(~(omega > 0)):
            raise ValueError("mode frequencies must be > 0")
        for arr in (omega, la, lb):
            arr.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "lambda_alpha", la)
        object.__setattr__(self, "lambda_beta", lb)

    @classmethod
    def from_modes(cls, omega0: float, modes) -> "DiscreteBath":
        modes = list(modes)
        return cls(
            omega0,
            np.array([m.omega for m in modes], dtype=float),
            np.array([m.lambda_alpha for m in modes], dtype=complex),
            np.array([m.lambda_beta for m in modes], dtype=complex),
        )

    @property
    def n_modes(self) -> int:
        return len(self.omega)

    @property
    def modes(self) -> list[Mode]:
        return [Mode(float(w), complex(a), complex(b))
                for w, a, b in zip(self.omega, self.lambda_alpha, self.lambda_beta)]

    def swapped(self) -> "DiscreteBath":
        """Same bath with the roles of the two spins exchanged."""
        return DiscreteBath(self.omega0, self.omega, self.lambda_beta, self.lambda_alpha)

    def scaled(self, factor: complex) -> "DiscreteBath":
        return DiscreteBath(self.omega0, self.omega, factor * self.lambda_alpha,
                            factor * self.lambda_beta)


@dataclass(frozen=True)
class KGrid:
    """Wave-vectors (rows) with quadrature weights.

    The spin separation is taken along the last axis, so only ``vectors[:, -1]``
    enters the plane-wave phase.
    """

    vectors: np.ndarray
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        w = np.array(self.weights, dtype=float, ndmin=1)
        if len(v) == 0:
            raise ValueError("empty k grid")
        if len(w) != len(v):
            raise ValueError("one weight per wave-vector is required")
        if np.any(w <= 0):
            raise ValueError("grid weights must be positive")
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "weights", w)

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.vectors, axis=1)


def line_grid(kc: float, n: int, symmetric: bool = True) -> KGrid:
    """Right-endpoint grid ``dk, 2dk, ..., kc`` (and its mirror) for d = 1."""
    dk = kc / n
    k = dk * np.arange(1, n + 1)
    if symmetric:
        k = np.concatenate([-k[::-1], k])
    return KGrid(k, np.full(len(k), dk / (2 * np.pi)))


def polar_grid(kc: float, n_k: int, n_phi: int = 64) -> KGrid:
    """d = 2: right-endpoint radial rule times a uniform (periodic) angle rule."""
    dk = kc / n_k
    k = dk * np.arange(1, n_k + 1)
    phi = 2 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
    kk, pp = np.meshgrid(k, phi, indexing="ij")
    vectors = np.stack([kk * np.sin(pp), kk * np.cos(pp)], axis=-1).reshape(-1, 2)
    weights = (kk * dk * (2 * np.pi / n_phi)).ravel() / (2 * np.pi) ** 2
    return KGrid(vectors, weights)


def spherical_grid(kc: float, n_k: int, n_mu: int = 48) -> KGrid:
    """d = 3: right-endpoint radial rule, Gauss-Legendre in cos(theta).

    The azimuth is integrated exactly (factor 2 pi) because the phase only
    depends on the polar angle; vectors are returned in the (x, z) plane.
    """
    dk = kc / n_k
    k = dk * np.arange(1, n_k + 1)
    mu, wmu = np.polynomial.legendre.leggauss(n_mu)
    kk, mm = np.meshgrid(k, mu, indexing="ij")
    _, ww = np.meshgrid(k, wmu, indexing="ij")
    sin_t = np.sqrt(1 - mm**2)
    vectors = np.stack([kk * sin_t, np.zeros_like(kk), kk * mm], axis=-1).reshape(-1, 3)
    weights = (kk**2 * dk * ww * 2 * np.pi).ravel() / (2 * np.pi) ** 3
    return KGrid(vectors, weights)


def plane_wave_bath(config: BathConfig, r: float, k_grid: KGrid) -> DiscreteBath:
    """Discretise the plane-wave coupling ``g * omega**nu * exp(i k.r)``.

    Weights ride inside the couplings as ``sqrt(weight)`` so that the plain
    mode sum of ``lambda_alpha * conj(lambda_beta) / (omega0 + omega)`` is a
    Riemann sum of the continuum integral.
    """
    if r < 0:
        raise ValueError("separation r must be >= 0")
    omega = k_grid.norms
    if np.any(omega <= 0):
        raise ValueError("grid frequencies must be > 0")
    if np.any(omega > config.kc * (1 + 1e-12)):
        raise ValueError("grid frequencies must not exceed kc")
    amp = config.g * omega**config.nu * np.sqrt(k_grid.weights)
    phase = np.exp(1j * k_grid.vectors[:, -1] * r)
    return DiscreteBath(config.k0, omega, amp.astype(complex), amp * phase)


def random_plane_wave_bath(n_modes: int, k0: float, g: float, r: float, nu: float = 0.0,
                           seed: int = 42) -> DiscreteBath:
    """Seeded N-mode bath with frequencies in [k0/2, 3k0/2] and wave-vectors of random sign.

    Couplings are ``g * k0 * (omega/k0)**nu`` at the first spin and carry the
    plane-wave phase ``exp(i k r)`` at the second.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    rng = np.random.default_rng(seed)
    omega = rng.uniform(0.5 * k0, 1.5 * k0, n_modes)
    k = omega * rng.choice([-1.0, 1.0], n_modes)
    amp = g * k0 * (omega / k0) ** nu
    return DiscreteBath(k0, omega, amp.astype(complex), amp * np.exp(1j * k * r))
