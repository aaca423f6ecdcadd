"""Bessel J0/J1, sine and cosine integrals, and J0 zeros.

All routines accept scalars or array-likes and return a float for scalar
input. They are self-contained (no scipy.special) so that scipy/mpmath can
serve as independent checks in the test-suite.
"""

from __future__ import annotations

import numpy as np

EULER_GAMMA = 0.57721566490153286061

_SERIES_MAX = 8.0
_MILLER_MAX = 25.0
_CISI_SERIES_MAX = 4.0


def _wrap(x, out):
    if np.ndim(x) == 0:
        return float(out)
    return out


def _j01_series(x):
    # alternating power series; round-off ~ 1e-14 absolute for |x| <= 8
    h = 0.25 * x * x
    t0 = np.ones_like(x)
    t1 = 0.5 * x
    j0 = t0.copy()
    j1 = t1.copy()
    for k in range(1, 40):
        t0 = -t0 * h / (k * k)
        t1 = -t1 * h / (k * (k + 1))
        j0 += t0
        j1 += t1
    return j0, j1


def _j01_miller(x):
    # backward recurrence normalised by J0 + 2 * sum_k J_2k = 1
    top = int(2 * ((int(np.max(x)) + 48) // 2))
    jp1 = np.zeros_like(x)
    jk = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    j1 = np.zeros_like(x)
    for k in range(top, 0, -1):
        jm1 = (2.0 * k / x) * jk - jp1
        jp1, jk = jk, jm1
        # jk now holds J_{k-1}
        if k - 1 == 1:
            j1 = jk.copy()
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * jk
        big = np.abs(jk) > 1e250
        if np.any(big):
            s = np.where(big, 1e-250, 1.0)
            jk, jp1, norm, j1 = jk * s, jp1 * s, norm * s, j1 * s
    norm += jk
    return jk / norm, j1 / norm


def _hankel_pq(mu, x):
    # asymptotic P, Q for order with mu = 4 nu^2
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, 40):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if k % 2 == 1:
            q += (-1) ** ((k - 1) // 2) * term
        else:
            p += (-1) ** (k // 2) * term
    return p, q


def _j01_asymptotic(x):
    c, s = np.cos(x), np.sin(x)
    amp = np.sqrt(2.0 / (np.pi * x))
    r2 = np.sqrt(0.5)
    p0, q0 = _hankel_pq(0.0, x)
    p1, q1 = _hankel_pq(4.0, x)
    # chi0 = x - pi/4, chi1 = x - 3pi/4
    j0 = amp * (p0 * (c + s) * r2 - q0 * (s - c) * r2)
    j1 = amp * (p1 * (s - c) * r2 + q1 * (s + c) * r2)
    return j0, j1


def bessel_j01(x):
    """Return ``(J0(x), J1(x))``."""
    xa = np.asarray(x, dtype=float)
    ax = np.abs(np.atleast_1d(xa)).astype(float)
    j0 = np.empty_like(ax)
    j1 = np.empty_like(ax)
    lo = ax <= _SERIES_MAX
    mid = (ax > _SERIES_MAX) & (ax <= _MILLER_MAX)
    hi = ax > _MILLER_MAX
    if np.any(lo):
        j0[lo], j1[lo] = _j01_series(ax[lo])
    if np.any(mid):
        j0[mid], j1[mid] = _j01_miller(ax[mid])
    if np.any(hi):
        j0[hi], j1[hi] = _j01_asymptotic(ax[hi])
    j1 = np.where(np.atleast_1d(xa) < 0, -j1, j1)
    if xa.ndim == 0:
        return float(j0[0]), float(j1[0])
    return j0.reshape(xa.shape), j1.reshape(xa.shape)


def bessel_j0(x):
    """Bessel function of the first kind of order zero."""
    return bessel_j01(x)[0]


def bessel_j1(x):
    return bessel_j01(x)[1]


def bessel_j0_zeros(m: int) -> np.ndarray:
    """First ``m`` positive zeros of J0 (McMahon guess + Newton)."""
    if m < 1:
        return np.empty(0)
    s = np.arange(1, m + 1, dtype=float)
    beta = (s - 0.25) * np.pi
    b8 = 8.0 * beta
    z = beta + 1.0 / b8 - 124.0 / (3.0 * b8**3) + 120928.0 / (15.0 * b8**5)
    for _ in range(8):
        j0, j1 = bessel_j01(z)
        step = j0 / j1  # J0' = -J1
        z = z + step
        if np.max(np.abs(step)) < 1e-15 * np.max(z):
            break
    return z


def _cisi_series(x):
    x2 = x * x
    si = x.copy()
    ci = np.zeros_like(x)
    term = x.copy()  # (-1)^k x^(2k+1) / (2k+1)!
    for k in range(1, 40):
        term = -term * x2 / ((2 * k) * (2 * k + 1))
        si += term / (2 * k + 1)
        # (-1)^k x^(2k) / (2k)! = term * (2k+1) / x
        ci += term * (2 * k + 1) / (x * 2 * k)
    ci += EULER_GAMMA + np.log(x)
    return ci, si


def _cisi_cf(x):
    # modified Lentz on E1(ix) = -Ci(x) + i (Si(x) - pi/2)
    tiny = 1e-300
    b = 1.0 + 1j * x
    c = np.full(x.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    done = np.zeros(x.shape, dtype=bool)
    for i in range(2, 400):
        a = -float((i - 1) ** 2)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) < 1e-16
        if np.all(done):
            break
    h = (np.cos(x) - 1j * np.sin(x)) * h
    return -h.real, 0.5 * np.pi + h.imag


def _cisi(x):
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    ci = np.empty_like(xa)
    si = np.empty_like(xa)
    lo = xa <= _CISI_SERIES_MAX
    if np.any(lo):
        ci[lo], si[lo] = _cisi_series(xa[lo])
    if np.any(~lo):
        ci[~lo], si[~lo] = _cisi_cf(xa[~lo])
    return ci, si


def sin_integral(x):
    """Si(x) = integral of sin(t)/t from 0 to x (odd in x)."""
    xa = np.asarray(x, dtype=float)
    ax = np.abs(np.atleast_1d(xa))
    out = np.zeros_like(ax)
    nz = ax > 0
    if np.any(nz):
        out[nz] = _cisi(ax[nz])[1]
    out = np.where(np.atleast_1d(xa) < 0, -out, out)
    return _wrap(x, out[0] if xa.ndim == 0 else out.reshape(xa.shape))


def cos_integral(x):
    """Ci(x) = gamma + ln x + integral of (cos t - 1)/t from 0 to x, x > 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0) or np.any(~np.isfinite(xa)):
        raise ValueError("Ci(x) is defined for finite x > 0")
    out = _cisi(xa)[0]
    return _wrap(x, out[0] if xa.ndim == 0 else out.reshape(xa.shape))
