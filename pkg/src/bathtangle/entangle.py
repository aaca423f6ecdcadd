"""Two-qubit entanglement: Wootters concurrence and the two-tangle.

Basis order throughout is (|ee>, |eg>, |ge>, |gg>).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics.linalg import jacobi_eigh

EE, EG, GE, GG = range(4)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


class DensityMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class DensityMatrix4:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise DensityMatrixError(f"expected a 4x4 matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @classmethod
    def from_pure(cls, amplitudes) -> "DensityMatrix4":
        psi = np.asarray(amplitudes, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


def check_density(rho) -> np.ndarray:
    """Return ``rho`` as an array, raising if an invariant is violated."""
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise DensityMatrixError(f"expected a 4x4 matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise DensityMatrixError("not Hermitian within 1e-12")
    if abs(np.trace(m) - 1.0) > TRACE_TOL:
        raise DensityMatrixError(f"trace {np.trace(m).real!r} differs from 1")
    if np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] < -PSD_TOL:
        raise DensityMatrixError("not positive semidefinite (eigenvalue < -1e-10)")
    return m


_EPS = np.finfo(float).eps
_ENDPOINT_TOL = 64 * _EPS


def _psd_eigvals(m):
    # eigenvalues at the rounding level of the largest one are zeros, not data:
    # their square roots would otherwise leak ~1e-8 into the concurrence
    w, v = jacobi_eigh(m)
    w = np.where(w <= 8 * _EPS * max(w[-1], 0.0), 0.0, w)
    return w, v


def _psd_sqrt(m):
    w, v = _psd_eigvals(m)
    return (v * np.sqrt(w)) @ v.conj().T


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, xi1 - xi2 - xi3 - xi4)``.

    The ``xi`` are square roots of the eigenvalues of ``rho @ rho_tilde``,
    obtained from the Hermitian similar matrix ``sqrt(rho) rho_tilde sqrt(rho)``.
    """
    m = check_density(rho)
    m = 0.5 * (m + m.conj().T)
    root = _psd_sqrt(m)
    flipped = SPIN_FLIP @ m.conj() @ SPIN_FLIP
    r = root @ flipped @ root
    lam = _psd_eigvals(r)[0]
    xi = np.sqrt(lam)[::-1]
    c = xi[0] - xi[1] - xi[2] - xi[3]
    # values within rounding of the endpoints are the endpoints (Bell -> 1 exactly)
    if c >= 1.0 - _ENDPOINT_TOL:
        return 1.0
    if c <= _ENDPOINT_TOL * xi[0]:
        return 0.0
    return float(c)


def two_tangle(rho) -> float:
    return concurrence(rho) ** 2


def x_state_concurrence(p_ee: float, p_eg: float, p_ge: float, p_gg: float,
                        coh_ee_gg: complex, coh_eg_ge: complex) -> float:
    """Closed-form concurrence of an X-shaped two-qubit state."""
    p = np.array([p_ee, p_eg, p_ge, p_gg], dtype=float)
    if np.any(p < -PSD_TOL) or abs(p.sum() - 1.0) > TRACE_TOL:
        raise DensityMatrixError("populations must be >= 0 and sum to 1")
    p = np.clip(p, 0.0, None)
    a, b = abs(coh_ee_gg), abs(coh_eg_ge)
    if a * a > p[0] * p[3] + PSD_TOL or b * b > p[1] * p[2] + PSD_TOL:
        raise DensityMatrixError("coherence exceeds the positivity bound")
    c = 2.0 * max(0.0, a - np.sqrt(p[1] * p[2]), b - np.sqrt(p[0] * p[3]))
    return float(min(c, 1.0))


def x_state_matrix(p_ee, p_eg, p_ge, p_gg, coh_ee_gg, coh_eg_ge) -> np.ndarray:
    m = np.diag(np.array([p_ee, p_eg, p_ge, p_gg], dtype=complex))
    m[EE, GG] = coh_ee_gg
    m[GG, EE] = np.conj(coh_ee_gg)
    m[EG, GE] = coh_eg_ge
    m[GE, EG] = np.conj(coh_eg_ge)
    return m


def overlap_tangle(c_ee: complex, norm: float) -> float:
    """Pure dressed-state shortcut ``4 |<ee,0|Psi>|^2``.

    ``c_ee`` is the unnormalised |ee,0> amplitude and ``norm`` the norm of the
    unnormalised state.
    """
    if not norm > 0:
        raise ValueError("norm must be > 0")
    return 4.0 * abs(c_ee) ** 2 / norm**2
