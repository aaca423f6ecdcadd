import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bathtangle.analysis import FitResult, claim_report, envelope, fit_exponent, window_sweep

R = np.logspace(-2, 1, 61)


def pts(y, r=R):
    return list(zip(r, y))


def test_pure_power_law():
    f = fit_exponent(pts(7 * R**-4.0))
    assert abs(f.exponent + 4) < 1e-12
    assert f.r_squared == 1.0
    assert f.window == (R[0], R[-1]) and f.n_points == len(R)


def test_constant_data():
    f = fit_exponent(pts(np.full(len(R), 3.3)))
    assert abs(f.exponent) < 1e-12
    assert f.r_squared == 1.0


def test_noisy_power_law():
    rng = np.random.default_rng(42)
    y = R**-2 * (1 + 0.01 * rng.uniform(-1, 1, len(R)))
    assert abs(fit_exponent(pts(y)).exponent + 2) <= 0.02


def test_fit_rejects_bad_data():
    with pytest.raises(ValueError, match="> 0"):
        fit_exponent(pts(np.sin(R)))
    with pytest.raises(ValueError, match="3 points"):
        fit_exponent([(1, 1), (2, 2)])
    with pytest.raises(ValueError, match="increasing"):
        fit_exponent([(1, 1), (3, 2), (2, 2)])


def test_fit_result_invariants():
    with pytest.raises(ValueError):
        FitResult(-1, 0, 1.0, (2, 1), 5)
    with pytest.raises(ValueError):
        FitResult(-1, 0, 1.0, (1, 2), 2)


@settings(max_examples=50, deadline=None)
@given(st.floats(-6, 6), st.floats(1e-3, 1e3), st.floats(1e-2, 1e2))
def test_fit_invariant_under_scaling(p, c, s):
    y = R**p * (1 + 0.1 * np.sin(3 * np.log(R)))
    base = fit_exponent(pts(y))
    scaled_y = fit_exponent(pts(c * y))
    assert abs(scaled_y.exponent - base.exponent) <= 1e-9
    scaled_r = fit_exponent(pts(y, s * R))
    assert abs(scaled_r.exponent - base.exponent) <= 1e-9


def test_window_sweep_pure_power_law():
    fits = window_sweep(pts(R**-1.5), 7)
    assert len(fits) == 7
    for f in fits:
        assert abs(f.exponent + 1.5) < 1e-10


def test_window_sweep_single_window_is_full_fit():
    y = R**-2 * (1 + 0.1 * np.cos(R))
    assert window_sweep(pts(y), 1) == [fit_exponent(pts(y))]


def test_window_sweep_crossover():
    r = np.logspace(-3, 3, 241)
    y = np.where(r < 1, r**-1.0, r**-3.0)
    fits = window_sweep(list(zip(r, y)), 11)
    left = [f for f in fits if f.window[1] <= 1]
    right = [f for f in fits if f.window[0] >= 1]
    assert abs(left[0].exponent + 1) < 0.05 and abs(right[0].exponent + 3) < 0.05


def test_window_sweep_sorted_and_deterministic():
    rng = np.random.default_rng(0)
    y = R**-2 * np.exp(0.05 * rng.normal(size=len(R)))
    a, b = window_sweep(pts(y), 9), window_sweep(pts(y), 9)
    assert a == b
    r2 = [f.r_squared for f in a]
    assert r2 == sorted(r2, reverse=True)


def test_window_sweep_rejects_degenerate_windows():
    with pytest.raises(ValueError):
        window_sweep(pts(R**-1), 0)
    with pytest.raises(ValueError):
        window_sweep([(1, 1), (2, 1), (1000, 1)], 3)


def test_claim_report():
    exact = [fit_exponent(pts(R**-4.0))]
    rep = claim_report(exact, -4, 0.1)
    assert rep.status == "pass" and rep.best.exponent == pytest.approx(-4)
    twos = window_sweep(pts(R**-2.0 * (1 + 1e-3 * np.sin(R))), 4)
    rep = claim_report(twos, -4, 0.3)
    assert rep.status == "flag"
    assert rep.claimed == -4 and abs(rep.best.exponent + 2) < 0.01
    assert rep.as_dict()["best"]["window"] == list(rep.best.window)


def test_claim_report_requires_good_fit():
    rng = np.random.default_rng(3)
    noisy = R**-4 * np.exp(rng.normal(size=len(R)) * 3)
    rep = claim_report(window_sweep(pts(noisy), 3), -4, 2.0)
    assert rep.status == "flag"


def test_envelope_of_oscillation():
    # far enough out that the 1/r^3 factor barely shifts the maxima of |cos r|
    r = np.linspace(10, 1000, 100_000)
    y = np.cos(r) / r**3
    env = envelope(list(zip(r, y)))
    assert abs(fit_exponent(env).exponent + 3) < 0.01
