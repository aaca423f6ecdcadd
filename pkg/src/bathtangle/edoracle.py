"""Exact diagonalisation of two spins coupled to a truncated N-mode bath.

Basis ordering is spin_alpha (x) spin_beta (x) mode_1 (x) ... (x) mode_N, each
spin in the order (|e>, |g>) and each mode in occupation order 0..n_max. The
two-spin block therefore follows (|ee>, |eg>, |ge>, |gg>).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .entangle import DensityMatrix4, two_tangle
from .model import DiscreteBath

DIMENSION_CAP = 16384
DENSE_LIMIT = 1024

_SZ = sp.csr_matrix(np.diag([1.0, -1.0]))
_SX = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class EDModel:
    bath: DiscreteBath
    n_max: int = 2
    cap: int = DIMENSION_CAP

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.dimension > self.cap:
            raise DimensionError(f"Hilbert dimension {self.dimension} exceeds cap {self.cap}")

    @property
    def dimension(self) -> int:
        return 4 * (self.n_max + 1) ** self.bath.n_modes


def _kron_all(ops):
    out = ops[0]
    for op in ops[1:]:
        out = sp.kron(out, op, format="csr")
    return sp.csr_matrix(out)


def build_hamiltonian(model: EDModel, dense: bool | None = None):
    """Full spin-boson Hamiltonian including counter-rotating terms."""
    bath = model.bath
    nb = model.n_max + 1
    n = bath.n_modes
    eye2 = sp.identity(2, format="csr")
    eyeb = sp.identity(nb, format="csr")
    a = sp.csr_matrix(np.diag(np.sqrt(np.arange(1, nb)), k=1))
    num = sp.csr_matrix(np.diag(np.arange(nb, dtype=float)))

    def mode_op(op, k):
        return [op if j == k else eyeb for j in range(n)]

    h = 0.5 * bath.omega0 * (_kron_all([_SZ, eye2] + mode_op(eyeb, -1))
                             + _kron_all([eye2, _SZ] + mode_op(eyeb, -1)))
    for k in range(n):
        h = h + bath.omega[k] * _kron_all([eye2, eye2] + mode_op(num, k))
        field_a = bath.lambda_alpha[k] * a + np.conj(bath.lambda_alpha[k]) * a.T
        field_b = bath.lambda_beta[k] * a + np.conj(bath.lambda_beta[k]) * a.T
        h = h + _kron_all([_SX, eye2] + mode_op(sp.csr_matrix(field_a), k))
        h = h + _kron_all([eye2, _SX] + mode_op(sp.csr_matrix(field_b), k))
    h = sp.csr_matrix(h, dtype=complex)
    if dense is None:
        dense = model.dimension <= DENSE_LIMIT
    return h.toarray() if dense else h


def ground_state(h) -> tuple[float, np.ndarray]:
    """Lowest eigenpair; phase fixed so the largest-modulus entry is real positive."""
    if sp.issparse(h):
        try:
            w, v = spla.eigsh(h, k=1, sigma=None, which="SA", tol=1e-13, maxiter=100_000)
        except spla.ArpackNoConvergence as exc:
            raise RuntimeError(f"ground state did not converge: {exc}") from exc
        energy, vec = float(w[0]), v[:, 0]
        norm_h = spla.norm(h, ord=1)
    else:
        h = np.asarray(h)
        w, v = np.linalg.eigh(h)
        energy, vec = float(w[0]), v[:, 0]
        norm_h = np.linalg.norm(h, ord=1)
    vec = vec / np.linalg.norm(vec)
    i = int(np.argmax(np.abs(vec)))
    vec = vec * (abs(vec[i]) / vec[i])
    residual = np.linalg.norm(h @ vec - energy * vec)
    if residual > 1e-9 * max(norm_h, 1.0):
        raise RuntimeError(f"ground-state residual {residual:.3e} too large")
    return energy, vec


def reduced_two_qubit(vector, model: EDModel) -> DensityMatrix4:
    """Partial trace over every boson mode."""
    vec = np.asarray(vector, dtype=complex)
    if vec.shape != (model.dimension,):
        raise DimensionError(f"vector length {vec.shape} does not match dimension {model.dimension}")
    psi = vec.reshape(4, -1)
    rho = psi @ psi.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix4(rho / np.real(np.trace(rho)))


def parity_operator(model: EDModel) -> np.ndarray:
    """Diagonal of (-1)^(spin excitations + boson number)."""
    nb = model.n_max + 1
    spin = np.array([2, 1, 1, 0])  # excitations in |ee>, |eg>, |ge>, |gg>
    occ = np.zeros(1, dtype=int)
    for _ in range(model.bath.n_modes):
        occ = (occ[:, None] + np.arange(nb)[None, :]).ravel()
    total = (spin[:, None] + occ[None, :]).ravel()
    return np.where(total % 2 == 0, 1.0, -1.0)


@dataclass(frozen=True)
class EDResult:
    energy: float
    vector: np.ndarray
    rho: DensityMatrix4
    tangle: float


def solve(model: EDModel) -> EDResult:
    energy, vec = ground_state(build_hamiltonian(model))
    rho = reduced_two_qubit(vec, model)
    return EDResult(energy, vec, rho, two_tangle(rho))


def ed_tangle(model: EDModel) -> float:
    return solve(model).tangle
