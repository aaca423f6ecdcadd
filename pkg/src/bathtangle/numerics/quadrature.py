"""Adaptive, oscillatory and regulated principal-value quadrature.

Everything is built on a vectorised Gauss-Kronrod (7, 15) rule applied to
batches of intervals, so an integrand is called with one flat numpy array per
refinement round. Subdivision is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15)
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps
MAX_ROUNDS = 60
MAX_LEAVES = 400_000


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    abs_error_estimate: float
    evaluations: int


class QuadratureError(RuntimeError):
    """Raised when a rule fails to reach its tolerance; carries ``best``."""

    def __init__(self, message: str, best: QuadResult | None = None):
        super().__init__(message)
        self.best = best


def _gk15(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    kron = half * (fx @ _KW)
    gauss = half * (fx @ _GW)
    floor = 50.0 * _EPS * np.abs(half) * (np.abs(fx) @ _KW)
    # error estimate never below the rounding level of the rule itself
    return kron, np.maximum(np.abs(kron - gauss), floor), floor


def integrate_segments(f, edges, tol=0.0, rel_tol=1e-12, max_leaves=MAX_LEAVES):
    """Integrate ``f`` over every segment ``[edges[i], edges[i+1]]``.

    Returns per-segment values, per-segment error estimates and the number of
    function evaluations. Refinement bisects leaves until the summed error is
    below ``max(tol, rel_tol * sum|segment values|)``.
    """
    edges = np.asarray(edges, dtype=float)
    nseg = len(edges) - 1
    if nseg < 1:
        raise ValueError("need at least two edges")
    if np.any(np.diff(edges) <= 0):
        raise ValueError("edges must be strictly increasing")
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    owner = np.arange(nseg)
    val, err, floor = _gk15(f, lo, hi)
    frozen = err <= floor
    nevals = 15 * nseg
    for _ in range(MAX_ROUNDS):
        seg_val = np.zeros(nseg, dtype=val.dtype)
        np.add.at(seg_val, owner, val)
        total = float(np.sum(err))
        # never ask for less than twice the accumulated rounding floor
        target = max(tol, rel_tol * float(np.sum(np.abs(seg_val))), 2.0 * float(np.sum(floor)))
        if total <= target:
            break
        nleaf = len(lo)
        # split the worst leaves until their removal would meet half the target
        cand = np.where(frozen, 0.0, err)
        order = np.argsort(-cand, kind="stable")
        need = total - 0.5 * target
        n_split = int(np.searchsorted(np.cumsum(cand[order]), need)) + 1
        split = np.zeros(nleaf, dtype=bool)
        split[order[:n_split]] = True
        split &= cand > 0
        width = hi - lo
        tiny = width <= 1e-13 * np.maximum(np.abs(lo), np.abs(hi))
        frozen |= split & tiny
        split &= ~tiny
        if not np.any(split):
            # remaining error sits at the rounding floor; report it as is
            break
        if nleaf + np.count_nonzero(split) > max_leaves:
            raise QuadratureError(
                f"adaptive quadrature stalled: error {total:.3e} > target {target:.3e}",
                QuadResult(_scalar(seg_val.sum()), total, nevals),
            )
        m = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], m])
        new_hi = np.concatenate([m, hi[split]])
        new_owner = np.concatenate([owner[split], owner[split]])
        nv, ne, nfl = _gk15(f, new_lo, new_hi)
        nevals += 15 * len(new_lo)
        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        owner = np.concatenate([owner[keep], new_owner])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        floor = np.concatenate([floor[keep], nfl])
        frozen = np.concatenate([frozen[keep], ne <= nfl])
    else:
        seg_val = np.zeros(nseg, dtype=val.dtype)
        np.add.at(seg_val, owner, val)
        raise QuadratureError(
            "adaptive quadrature exceeded maximum refinement rounds",
            QuadResult(_scalar(seg_val.sum()), float(np.sum(err)), nevals),
        )
    return _collect(seg_val, err, owner, nseg, nevals)


def _collect(seg_val, err, owner, nseg, nevals):
    seg_err = np.zeros(nseg)
    np.add.at(seg_err, owner, err)
    return seg_val, seg_err, nevals


def _scalar(v):
    v = complex(v)
    return v if v.imag != 0.0 else v.real


def integrate_adaptive(f: Callable, a: float, b: float, tol: float = 1e-10,
                       rel_tol: float = 0.0, pieces: int = 1) -> QuadResult:
    """Adaptive Gauss-Kronrod integral of a vectorised ``f`` over ``[a, b]``."""
    if not a < b:
        raise ValueError("integrate_adaptive requires a < b")
    if tol <= 0 and rel_tol <= 0:
        raise ValueError("a positive tolerance is required")
    edges = np.linspace(a, b, pieces + 1)
    vals, errs, n = integrate_segments(f, edges, tol=tol, rel_tol=rel_tol)
    return QuadResult(_scalar(vals.sum()), float(errs.sum()), n)


def iterated_average(partial_sums: np.ndarray) -> tuple[complex, float]:
    """Limit of an alternating partial-sum sequence by repeated averaging.

    Equivalent to Euler's transform; also sums alternating series whose terms
    grow polynomially. Returns the estimate and the change over the last level.
    """
    t = np.asarray(partial_sums)
    if len(t) < 3:
        raise ValueError("need at least three partial sums")
    prev = t
    while len(t) > 1:
        prev = t
        t = 0.5 * (t[:-1] + t[1:])
    return t[0], float(np.max(np.abs(prev - t[0])))


def _zeros_upto(zeros, count):
    if callable(zeros):
        return np.asarray(zeros(count), dtype=float)
    return np.asarray(zeros, dtype=float)[:count]


def integrate_oscillatory(f: Callable, zeros: Callable[[int], np.ndarray] | Sequence[float],
                          tol: float = 1e-12, *, rel_tol: float = 1e-10, lower: float = 0.0,
                          upper: float = math.inf, max_lobes: int = 4096) -> QuadResult:
    """Integrate an oscillatory ``f`` from ``lower`` to ``upper`` lobe by lobe.

    ``zeros`` is either a callable returning the first ``m`` sign changes of
    the integrand above ``lower`` or an explicit increasing sequence. With a
    finite ``upper`` the lobes are summed directly; for an infinite upper limit
    the partial sums are accelerated by iterated averaging, which also assigns
    the Abel value to tails whose lobes grow polynomially.
    """
    if math.isfinite(upper):
        count = 64
        while True:
            z = _zeros_upto(zeros, count)
            if not callable(zeros) or (len(z) and z[-1] >= upper) or count > 10_000_000:
                break
            count *= 4
        z = z[(z > lower) & (z < upper)]
        edges = np.concatenate([[lower], z, [upper]])
        vals, errs, n = integrate_segments(f, edges, tol=tol, rel_tol=rel_tol * 1e-2)
        return QuadResult(_scalar(vals.sum()), float(errs.sum()), n)

    count = 32
    last = None
    nevals = 0
    while True:
        z = _zeros_upto(zeros, count)
        z = z[z > lower]
        edges = np.concatenate([[lower], z])
        vals, errs, n = integrate_segments(f, edges, tol=tol * 1e-3, rel_tol=1e-14)
        nevals += n
        if np.all(vals == 0):
            return QuadResult(0.0, 0.0, nevals)
        partial = np.cumsum(vals)
        est, change = iterated_average(partial)
        # averaging is linear with positive weights; apply it to the error bound too
        lobe_err, _ = iterated_average(np.cumsum(errs))
        accel = change if last is None else max(change, abs(est - last))
        # each lobe already met its own tolerance, so convergence is judged on the
        # acceleration alone; the lobe bound still enters the reported error
        err = accel + float(lobe_err)
        # cancellation floor: partial sums can exceed the limit by orders of magnitude
        target = max(tol, rel_tol * abs(est), 1e-12 * float(np.max(np.abs(partial))))
        if last is not None and accel <= target:
            return QuadResult(_scalar(est), err, nevals)
        if count >= max_lobes or (not callable(zeros) and len(edges) - 1 < count):
            raise QuadratureError(
                f"lobe acceleration did not converge: error {err:.3e} > {target:.3e}",
                QuadResult(_scalar(est), err, nevals),
            )
        last = est
        count *= 2


def richardson_to_zero(h: Sequence[float], values: Sequence[complex]) -> tuple[complex, list]:
    """Neville extrapolation of ``values(h)`` to ``h = 0``.

    Returns the extrapolated value and the list of successive diagonal
    estimates (useful as diagnostics).
    """
    h = np.asarray(h, dtype=float)
    p = np.asarray(values, dtype=complex).copy()
    diag = [p[-1]]
    n = len(h)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i])
        diag.append(p[n - m - 1])
    return p[0], diag


def integrate_pv_regulated(f_num: Callable, pole: float | None, eta_sequence: Sequence[float],
                           upper: float | None = None, *, deltas: Sequence[float] | None = None,
                           period: float | None = None, tol: float = 1e-13,
                           rel_tol: float = 1e-9) -> QuadResult:
    """PV integral of ``f_num(k) / (k - pole)`` over ``[0, upper]`` as eta -> 0.

    Each evaluation carries the regulator ``exp(-eta k)``; ``upper`` defaults
    to the point where the regulator has decayed below machine precision.
    A pole inside the range is excised symmetrically with half-widths
    ``deltas = (d, d/2)`` and the result extrapolated linearly to zero width.
    The sequence over ``eta`` is Richardson-extrapolated to ``eta = 0``.
    """
    etas = np.asarray(eta_sequence, dtype=float)
    if len(etas) < 2 or np.any(etas <= 0) or np.any(np.diff(etas) >= 0):
        raise ValueError("eta_sequence must be positive and strictly decreasing (>= 2 values)")
    values = []
    nevals = 0
    qerr = 0.0
    for eta in etas:
        k_max = upper if upper is not None else (40.0 + 10.0 * math.log1p(1.0 / eta)) / eta
        on_path = pole is not None and 0.0 < pole < k_max

        def g(k, eta=eta):
            if pole is None:
                return f_num(k) * np.exp(-eta * k)
            return f_num(k) * np.exp(-eta * k) / (k - pole)

        width = period if period is not None else k_max / 64.0

        def piece(a, b):
            n_pieces = max(1, int(math.ceil((b - a) / width)))
            edges = np.linspace(a, b, n_pieces + 1)
            try:
                v, e, n = integrate_segments(g, edges, tol=0.0, rel_tol=rel_tol)
            except QuadratureError as exc:
                # phase round-off at large k*r; the error estimate is carried forward
                return exc.best.value, exc.best.abs_error_estimate, exc.best.evaluations
            return v.sum(), e.sum(), n

        if on_path:
            d0 = deltas if deltas is not None else (0.02 * min(pole, k_max - pole),)
            d_pair = (d0[0], d0[1] if len(d0) > 1 else 0.5 * d0[0])
            excised = []
            for d in d_pair:
                v1, e1, n1 = piece(0.0, pole - d)
                v2, e2, n2 = piece(pole + d, k_max)
                excised.append(v1 + v2)
                qerr = max(qerr, e1 + e2)
                nevals += n1 + n2
            da, db = d_pair
            # linear extrapolation of the excised integral to zero width
            val = (da * excised[1] - db * excised[0]) / (da - db)
        else:
            val, e, n = piece(0.0, k_max)
            qerr = max(qerr, e)
            nevals += n
        values.append(val)
    est, diag = richardson_to_zero(etas, values)
    err = abs(diag[-1] - diag[-2]) + qerr
    scale = max(abs(est), 1e-300)
    if err > 0.05 * scale and err > tol:
        raise QuadratureError(
            f"eta extrapolation unstable: estimates {[complex(d) for d in diag]}",
            QuadResult(_scalar(est), err, nevals),
        )
    return QuadResult(_scalar(est), err, nevals)
