"""Power-law fits of r-scans: single fits, sliding windows and claim reports."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass(frozen=True)
class FitResult:
    exponent: float
    intercept: float
    r_squared: float
    window: tuple[float, float]
    n_points: int

    def __post_init__(self):
        if not self.window[0] < self.window[1]:
            raise ValueError("window must satisfy r_min < r_max")
        if self.n_points < 3:
            raise ValueError("a fit needs at least 3 points")
        if not 0.0 <= self.r_squared <= 1.0:
            raise ValueError(f"r_squared {self.r_squared} outside [0, 1]")


def _split(points):
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("points must be (r, y) pairs")
    return arr[:, 0], arr[:, 1]


def fit_exponent(points) -> FitResult:
    """Least-squares line through (ln r, ln y); the slope is the exponent."""
    r, y = _split(points)
    if len(r) < 3:
        raise ValueError("fewer than 3 points")
    if np.any(r <= 0):
        raise ValueError("r values must be > 0")
    if np.any(y <= 0):
        raise ValueError("y values must be > 0; fit |y| or the envelope of a sign-changing amplitude")
    if np.any(np.diff(r) <= 0):
        raise ValueError("r values must be strictly increasing")
    lx, ly = np.log(r), np.log(y)
    xm, ym = lx.mean(), ly.mean()
    dx, dy = lx - xm, ly - ym
    slope = float(dx @ dy / (dx @ dx))
    intercept = float(ym - slope * xm)
    ss_res = float(np.sum((dy - slope * dx) ** 2))
    ss_tot = float(dy @ dy)
    # a residual at rounding level of the data counts as a perfect fit
    if ss_res <= 1e-24 * max(float(ly @ ly), 1.0):
        r2 = 1.0
    else:
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return FitResult(slope, intercept, min(max(r2, 0.0), 1.0), (float(r[0]), float(r[-1])), len(r))


def envelope(points) -> list[tuple[float, float]]:
    """Local maxima of |y| (interior points only), for fits of oscillating data."""
    r, y = _split(points)
    a = np.abs(y)
    idx = [i for i in range(1, len(a) - 1) if a[i] >= a[i - 1] and a[i] > a[i + 1]]
    return [(float(r[i]), float(a[i])) for i in idx]


def window_sweep(scan, window_count: int, decades: float | None = None) -> list[FitResult]:
    """Fit sliding windows equally spaced in log r.

    With ``window_count = 1`` the single window is the whole scan. Otherwise
    each window spans ``decades`` (default: one decade, or the full range if
    the scan is shorter) and the starts are spread evenly across the scan.
    Results are ordered by r_squared, best first (ties keep window order).
    """
    if window_count < 1:
        raise ValueError("window_count must be >= 1")
    r, y = _split(scan)
    if np.any(np.diff(r) <= 0):
        raise ValueError("scan must be sorted by strictly increasing r")
    if len(r) < 3:
        raise ValueError("scan too short for a fit")
    if window_count == 1:
        return [fit_exponent(np.column_stack([r, y]))]
    lo, hi = math.log10(r[0]), math.log10(r[-1])
    width = min(decades if decades is not None else 1.0, hi - lo)
    starts = np.linspace(lo, hi - width, window_count)
    lr = np.log10(r)
    fits = []
    tol = 1e-9 * max(1.0, abs(hi), abs(lo))
    for s in starts:
        mask = (lr >= s - tol) & (lr <= s + width + tol)
        if np.count_nonzero(mask) < 3:
            raise ValueError(f"window starting at 10^{s:.3g} holds fewer than 3 points")
        fits.append(fit_exponent(np.column_stack([r[mask], y[mask]])))
    order = sorted(range(len(fits)), key=lambda i: -fits[i].r_squared)
    return [fits[i] for i in order]


@dataclass(frozen=True)
class ClaimReport:
    claimed: float
    tolerance: float
    status: str
    best: FitResult | None
    exponents: list[float] = field(default_factory=list)
    min_r_squared: float = 0.99

    def as_dict(self) -> dict:
        d = asdict(self)
        if self.best is not None:
            d["best"]["window"] = list(self.best.window)
        return d


def claim_report(fits, claimed: float, tolerance: float, min_r_squared: float = 0.99) -> ClaimReport:
    """Compare fitted windows with a claimed exponent without asserting anything.

    ``status`` is ``pass`` when some window with ``r_squared >= min_r_squared``
    lies within ``tolerance`` of the claim, ``flag`` otherwise. ``best`` is the
    qualifying window closest to the claim (or, if none qualifies, the closest
    window overall).
    """
    fits = list(fits)
    good = [f for f in fits if f.r_squared >= min_r_squared]
    pool = good or fits
    best = min(pool, key=lambda f: abs(f.exponent - claimed)) if pool else None
    ok = bool(good) and abs(best.exponent - claimed) <= tolerance
    return ClaimReport(claimed, tolerance, "pass" if ok else "flag", best,
                       [f.exponent for f in fits], min_r_squared)
