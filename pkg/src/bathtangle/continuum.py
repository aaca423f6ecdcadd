"""Continuum-limit exchange amplitudes and tangles.

The "bare" amplitudes returned by the per-dimension functions are the radial
integrals left after the angular integration, with the solid-angle constant
removed:

* d = 3: ``(1/r) int_0^kc k^(1+2nu) sin(kr) / (k + k0) dk``
* d = 2: ``int_0^kc k^(1+2nu) J0(kr) / (k + k0) dk``
* d = 1: ``int_R k^n exp(ikr) / (k + k0) dk`` (pole at ``k = -k0``, principal value)

``continuum_amplitude`` restores the mode-density prefactor (angular constant
over ``(2 pi)^d``) and the coupling ``g^2``, so discrete plane-wave baths
converge to it. Integrals are evaluated in ``t = k r`` so that lobe boundaries
are fixed numbers (multiples of pi, zeros of J0).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import BathConfig, validate
from .numerics import (
    QuadResult,
    bessel_j0,
    bessel_j0_zeros,
    cos_integral,
    integrate_oscillatory,
    integrate_pv_regulated,
    sin_integral,
)

_EPS = np.finfo(float).eps


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    SMOOTHED = "smoothed"
    RESIDUE = "residue"
    PV_NUMERIC = "pv_numeric"


class Convention(str, Enum):
    FULL_LINE = "full_line"
    ABS_K = "abs_k"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str) and "-" in value:
            return cls(value.replace("-", "_"))
        return None


@dataclass(frozen=True)
class Amplitude:
    value: complex
    method: Method
    abs_error_estimate: float = 0.0

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be >= 0")
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "method", Method(self.method))

    def scaled(self, factor: float) -> "Amplitude":
        return Amplitude(self.value * factor, self.method, self.abs_error_estimate * abs(factor))


def _check_positive(**kw):
    for name, v in kw.items():
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"{name} must be finite and > 0 (got {v})")


def _check_cutoff(k0, kc):
    if not kc > k0:
        raise ValueError(f"kc <= k0 ({kc} <= {k0})")


def angular_factor(d: int, x: float) -> float:
    """Angular integral of ``exp(i k.r)`` over directions, as a function of ``x = kr``."""
    if x < 0:
        raise ValueError("x must be >= 0")
    if d == 3:
        return 4 * math.pi * (1.0 if x == 0 else math.sin(x) / x)
    if d == 2:
        return 2 * math.pi * bessel_j0(x)
    if d == 1:
        raise ValueError("d=1 has no angular factor; use the full-line integral")
    raise ValueError(f"unsupported dimension {d}")


def mode_sum_prefactor(d: int) -> float:
    """Angular constant over ``(2 pi)^d`` linking bare integrals to mode sums."""
    return {3: 4 * math.pi / (2 * math.pi) ** 3, 2: 2 * math.pi / (2 * math.pi) ** 2,
            1: 1 / (2 * math.pi)}[d]


def _closed_terms(r, k0, kc, nu):
    """Smooth part, cutoff-oscillating part and magnitude scale of the bare
    d=3 amplitude times ``r^3`` for nu in {0, 1/2}.

    Both follow from ``int_0^kc sin(kr)/(k+k0) dk = cos(x) dSi - sin(x) dCi``
    with ``x = k0 r``, ``dSi = Si(x + kc r) - Si(x)`` and ``dCi`` likewise.
    """
    if nu not in (0, 0.5):
        raise ValueError("closed forms exist for nu = 0 and nu = 1/2 only")
    x = k0 * r
    if math.isinf(kc):
        dci, dsi = -cos_integral(x), math.pi / 2 - sin_integral(x)
    else:
        y = x + kc * r
        dci = cos_integral(y) - cos_integral(x)
        dsi = sin_integral(y) - sin_integral(x)
    kernel = math.cos(x) * dsi - math.sin(x) * dci
    kscale = abs(dsi) + abs(dci)
    if nu == 0:
        smooth, scale = r - x * r * kernel, r + x * r * kscale
        osc = 0.0 if math.isinf(kc) else -r * math.cos(kc * r)
    else:
        smooth, scale = x * (-1.0 + x * kernel), x * (1.0 + x * kscale)
        osc = 0.0 if math.isinf(kc) else (k0 - kc) * r * math.cos(kc * r) + math.sin(kc * r)
    return smooth, osc, scale + abs(osc) + (0.0 if math.isinf(kc) else kc * r + 1)


def amplitude_3d_closed(r: float, k0: float, kc: float, nu: float = 0.5) -> Amplitude:
    """Closed form of the d=3 amplitude with a sharp cutoff (nu = 1/2 or 0)."""
    _check_positive(r=r, k0=k0, kc=kc)
    _check_cutoff(k0, kc)
    smooth, osc, scale = _closed_terms(r, k0, kc, nu)
    value = (smooth + osc) / r**3
    return Amplitude(value, Method.CLOSED_FORM, 64 * _EPS * scale / r**3)


def amplitude_3d_smoothed(r: float, k0: float, kc: float = math.inf, nu: float = 0.5) -> Amplitude:
    """Closed form with the terms oscillating as cos(kc r), sin(kc r) dropped."""
    _check_positive(r=r, k0=k0)
    _check_cutoff(k0, kc)
    smooth, _, scale = _closed_terms(r, k0, kc, nu)
    return Amplitude(smooth / r**3, Method.SMOOTHED, 64 * _EPS * scale / r**3)


def _pi_multiples(m):
    return math.pi * np.arange(1, m + 1)


def _scaled_upper(kc, r):
    return kc * r if math.isfinite(kc) else math.inf


def amplitude_3d_quad(r: float, nu: float, k0: float, kc: float = math.inf,
                      rel_tol: float = 1e-12) -> Amplitude:
    """d=3 amplitude for any nu by lobe-wise quadrature (Abel value if kc is infinite)."""
    _check_positive(r=r, k0=k0)
    _check_cutoff(k0, kc)
    if nu < 0:
        raise ValueError("nu must be >= 0")
    p, x = 1 + 2 * nu, k0 * r

    def f(t):
        return t**p * np.sin(t) / (t + x)

    q = integrate_oscillatory(f, _pi_multiples, tol=0.0, rel_tol=rel_tol,
                              upper=_scaled_upper(kc, r))
    scale = r ** -(2 + 2 * nu)
    return Amplitude(q.value * scale, Method.QUADRATURE, q.abs_error_estimate * scale)


def amplitude_2d(r: float, nu: float, k0: float, kc: float = math.inf,
                 rel_tol: float = 1e-12) -> Amplitude:
    """d=2 amplitude, J0 kernel, lobes bounded by the zeros of J0."""
    _check_positive(r=r, k0=k0)
    _check_cutoff(k0, kc)
    if nu < 0:
        raise ValueError("nu must be >= 0")
    p, x = 1 + 2 * nu, k0 * r

    def f(t):
        return t**p * bessel_j0(t) / (t + x)

    q = integrate_oscillatory(f, bessel_j0_zeros, tol=0.0, rel_tol=rel_tol,
                              upper=_scaled_upper(kc, r))
    scale = r ** -(1 + 2 * nu)
    return Amplitude(q.value * scale, Method.QUADRATURE, q.abs_error_estimate * scale)


def _check_order(n):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer (got {n})")
    return int(n)


def amplitude_1d_residue(r: float, n: int, k0: float) -> Amplitude:
    """Full-line d=1 amplitude from the residue at k = k0."""
    n = _check_order(n)
    _check_positive(r=r, k0=k0)
    value = (-1) ** n * 1j * math.pi * k0**n * cmath.exp(-1j * k0 * r)
    return Amplitude(value, Method.RESIDUE, 0.0)


def _pv_full_line(r, n, k0):
    # split at k = 0: the negative half-line maps onto a pole at +k0
    scale = min(r, 1.0 / k0)
    etas = [0.5 * scale / 2**j for j in range(6)]
    delta = 0.05 * min(k0, 1.0 / r)
    period = 2 * math.pi / r
    right = integrate_pv_regulated(lambda k: k**n * np.exp(1j * k * r), -k0, etas, period=period)
    left = integrate_pv_regulated(lambda k: k**n * np.exp(-1j * k * r), k0, etas, period=period,
                                  deltas=(delta, delta / 2))
    value = right.value - (-1) ** n * left.value
    return QuadResult(value, right.abs_error_estimate + left.abs_error_estimate,
                      right.evaluations + left.evaluations)


def _abs_k(r, n, k0, kc, rel_tol):
    x = k0 * r
    if n % 2 == 0:
        def f(t):
            return t**n * np.cos(t) / (t + x)

        def zeros(m):
            return math.pi * (np.arange(1, m + 1) - 0.5)
        factor = 2.0
    else:
        def f(t):
            return t**n * np.sin(t) / (t + x)
        zeros = _pi_multiples
        factor = 2.0j
    q = integrate_oscillatory(f, zeros, tol=0.0, rel_tol=rel_tol, upper=_scaled_upper(kc, r))
    scale = r ** -n
    return QuadResult(factor * q.value * scale, 2 * q.abs_error_estimate * scale, q.evaluations)


def amplitude_1d_numeric(r: float, n: int, k0: float, convention: Convention | str = Convention.FULL_LINE,
                         kc: float = math.inf, rel_tol: float = 1e-12) -> Amplitude:
    """Numerical d=1 amplitude.

    ``full_line`` evaluates the two half-line pieces with an exponential
    regulator (principal value at the pole) and extrapolates the regulator to
    zero. ``abs_k`` evaluates ``int_0^kc k^n (e^{ikr} + (-1)^n e^{-ikr})/(k0+k) dk``,
    which has no pole and depends on r.
    """
    n = _check_order(n)
    _check_positive(r=r, k0=k0)
    convention = Convention(convention)
    if convention is Convention.FULL_LINE:
        if math.isfinite(kc):
            raise ValueError("the full-line convention is only defined without a cutoff")
        q = _pv_full_line(r, n, k0)
    else:
        _check_cutoff(k0, kc)
        q = _abs_k(r, n, k0, kc, rel_tol)
    return Amplitude(q.value, Method.PV_NUMERIC, q.abs_error_estimate)


_METHOD_ALIASES = {
    "closed": Method.CLOSED_FORM, "quad": Method.QUADRATURE, "smoothed": Method.SMOOTHED,
    "residue": Method.RESIDUE, "pv": Method.PV_NUMERIC,
}


def default_method(config: BathConfig) -> Method:
    if config.dimension == 1:
        return Method.RESIDUE
    if config.dimension == 3 and config.nu in (0, 0.5):
        # the smoothed form is the closed form's infinite-cutoff limit
        return Method.SMOOTHED if math.isinf(config.kc) else Method.CLOSED_FORM
    return Method.QUADRATURE


def bare_amplitude(config: BathConfig, r: float, method: Method | str | None = None,
                   convention: Convention | str = Convention.FULL_LINE) -> Amplitude:
    """Dispatch to the per-dimension bare amplitude."""
    validate(config)
    if method is None:
        method = default_method(config)
    method = _METHOD_ALIASES.get(method, method) if isinstance(method, str) else method
    method = Method(method)
    d, nu, k0, kc = config.dimension, config.nu, config.k0, config.kc
    if d == 3:
        if method is Method.CLOSED_FORM:
            return amplitude_3d_closed(r, k0, kc, nu)
        if method is Method.SMOOTHED:
            return amplitude_3d_smoothed(r, k0, kc, nu)
        if method is Method.QUADRATURE:
            return amplitude_3d_quad(r, nu, k0, kc)
    elif d == 2:
        if method is Method.QUADRATURE:
            return amplitude_2d(r, nu, k0, kc)
    else:
        if method is Method.RESIDUE:
            if Convention(convention) is not Convention.FULL_LINE:
                raise ValueError("the residue formula belongs to the full-line convention")
            return amplitude_1d_residue(r, config.n, k0)
        if method is Method.PV_NUMERIC:
            conv = Convention(convention)
            cut = kc if conv is Convention.ABS_K else math.inf
            return amplitude_1d_numeric(r, config.n, k0, conv, kc=cut)
    raise ValueError(f"method {method.value} is not available in d={d}")


def continuum_amplitude(config: BathConfig, r: float, method: Method | str | None = None,
                        convention: Convention | str = Convention.FULL_LINE) -> Amplitude:
    """Bare amplitude times the mode-density prefactor and ``g^2``."""
    bare = bare_amplitude(config, r, method, convention)
    return bare.scaled(config.g**2 * mode_sum_prefactor(config.dimension))


def tangle_from_amplitude(amplitude: complex, k0: float) -> float:
    return 4.0 / k0**2 * abs(amplitude) ** 2


def tangle_continuum(config: BathConfig, r: float, method: Method | str | None = None,
                     convention: Convention | str = Convention.FULL_LINE) -> float:
    amp = continuum_amplitude(config, r, method, convention)
    return tangle_from_amplitude(amp.value, config.k0)
