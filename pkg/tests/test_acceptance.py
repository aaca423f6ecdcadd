"""Acceptance suite: one PASS/FAIL line per criterion, printed even without -s."""

import math
import time

import mpmath as mp
import numpy as np
import pytest

from bathtangle import cli
from bathtangle.analysis import claim_report, window_sweep
from bathtangle.continuum import (
    amplitude_1d_numeric,
    amplitude_2d,
    amplitude_3d_closed,
    amplitude_3d_quad,
    amplitude_3d_smoothed,
    continuum_amplitude,
    tangle_continuum,
    tangle_from_amplitude,
)
from bathtangle.edoracle import EDModel, solve
from bathtangle.entangle import concurrence, two_tangle
from bathtangle.model import BathConfig, line_grid, plane_wave_bath, random_plane_wave_bath, spherical_grid
from bathtangle.numerics import bessel_j0, bessel_j0_zeros, cos_integral, sin_integral
from bathtangle.perturb import discrete_amplitude, dressed_state, energy_shift2, reduced_state


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok
    return emit


def _yy_oracle(rho):
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    lam = np.abs(np.linalg.eigvals(rho @ yy @ rho.conj() @ yy))
    xi = np.sort(np.sqrt(lam))[::-1]
    return max(0.0, xi[0] - xi[1] - xi[2] - xi[3])


def _random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


def test_criterion_1_concurrence(report):
    t = time.perf_counter()
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    bell = concurrence(np.outer(phi, phi))
    product = concurrence(np.diag([0.0, 0.0, 0.0, 1.0]))
    werner_err = 0.0
    for p in np.linspace(0, 1, 6):
        rho = p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4
        c = concurrence(rho)
        werner_err = max(werner_err, abs(c - max(0.0, (3 * p - 1) / 2)), abs(c - _yy_oracle(rho)))
    rng = np.random.default_rng(2024)
    lu_err = 0.0
    for _ in range(200):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = z @ z.conj().T
        rho /= np.trace(rho).real
        u = np.kron(_random_unitary(rng), _random_unitary(rng))
        lu_err = max(lu_err, abs(concurrence(u @ rho @ u.conj().T) - concurrence(rho)))
    dt = time.perf_counter() - t
    ok = bell == 1.0 and product == 0.0 and werner_err <= 1e-10 and lu_err <= 1e-9 and dt < 1.0
    assert report(1, ok, f"bell={bell!r} product={product!r} werner_err={werner_err:.2e} "
                         f"local_unitary_err={lu_err:.2e} time={dt:.2f}s")


def test_criterion_2_closed_vs_quadrature_3d(report):
    t = time.perf_counter()
    worst = 0.0
    for k0 in (0.1, 1.0):
        for ratio in (10, 100, 1000):
            for x in (1e-3, 1e-2, 1e-1, 1.0, 10.0):
                r, kc = x / k0, ratio * k0
                a = amplitude_3d_closed(r, k0, kc).value
                q = amplitude_3d_quad(r, 0.5, k0, kc).value
                worst = max(worst, abs(a - q) / abs(q))
    dt = time.perf_counter() - t
    assert report(2, worst <= 1e-8 and dt < 10, f"worst_rel={worst:.2e} time={dt:.2f}s")


def test_criterion_3_one_dimension_distance_independence(report):
    t = time.perf_counter()
    const_err = 0.0
    for k0 in (0.5, 1.0, 2.0):
        for n in (0, 1, 2):
            cfg = BathConfig(1, n / 2, k0, math.inf, 1.0)
            taus = [tangle_continuum(cfg, x / k0) for x in np.logspace(-1, 2, 31)]
            const_err = max(const_err, (max(taus) - min(taus)) / max(taus))
    pv_err = 0.0
    for n in (0, 1, 2):
        for x in (0.5, 1.0, 2.0, 5.0, 20.0):
            a = amplitude_1d_numeric(x, n, 1.0).value
            pv_err = max(pv_err, abs(abs(a) - math.pi) / math.pi)
    dt = time.perf_counter() - t
    ok = const_err <= 1e-12 and pv_err <= 1e-3 and dt < 30
    assert report(3, ok, f"residue_spread={const_err:.2e} pv_modulus_err={pv_err:.2e} time={dt:.2f}s")


def _ed_ratios(n_modes):
    errs = []
    simple = []
    for g in (1e-2, 5e-3, 2.5e-3):
        bath = random_plane_wave_bath(n_modes, 1.0, g, 0.5, seed=7)
        res = solve(EDModel(bath, n_max=2))
        pert = two_tangle(reduced_state(dressed_state(bath)))
        shift = energy_shift2(bath)
        errs.append((abs(pert - res.tangle) / res.tangle,
                     abs(shift - (res.energy + bath.omega0)) / abs(res.energy + bath.omega0)))
        simple.append(4 * abs(discrete_amplitude(bath)) ** 2 / res.tangle)
    ratios = [(a[0] / b[0], a[1] / b[1]) for a, b in zip(errs, errs[1:])]
    return ratios, simple


def test_criterion_4_ed_convergence(report):
    t = time.perf_counter()
    details, ok = [], True
    for n_modes in (1, 3):
        ratios, simple = _ed_ratios(n_modes)
        ok &= all(2 <= x <= 8 for pair in ratios for x in pair)
        details.append(f"N={n_modes} tangle_ratios={[round(a, 3) for a, _ in ratios]} "
                       f"energy_ratios={[round(b, 3) for _, b in ratios]} "
                       f"simple_form_over_ed={[round(s, 3) for s in simple]}")
    dt = time.perf_counter() - t
    ok &= dt < 60
    assert report(4, ok, " ".join(details) + f" time={dt:.2f}s")


def _riemann_ratios(cfg, r, grid, ref):
    errs = [abs(discrete_amplitude(plane_wave_bath(cfg, r, grid(cfg.kc, n))) - ref)
            for n in (100, 200, 400, 800)]
    return [a / b for a, b in zip(errs, errs[1:])]


def test_criterion_5_riemann_sums(report):
    t = time.perf_counter()
    cfg3 = BathConfig(3, 0.5, 1.0, 10.0, 1.0)
    ratios = {"d3_nu0.5": _riemann_ratios(cfg3, 1.0, spherical_grid,
                                          continuum_amplitude(cfg3, 1.0, "closed").value)}
    for nu in (0.0, 1.0):
        cfg1 = BathConfig(1, nu, 1.0, 10.0, 1.0)
        ref = continuum_amplitude(cfg1, 1.0, "pv", "abs-k").value
        ratios[f"d1_abs_k_nu{nu:g}"] = _riemann_ratios(cfg1, 1.0, line_grid, ref)
    dt = time.perf_counter() - t
    ok = all(1.7 <= x <= 2.3 for v in ratios.values() for x in v) and dt < 20
    shown = {k: [round(x, 3) for x in v] for k, v in ratios.items()}
    assert report(5, ok, f"ratios={shown} time={dt:.2f}s")


def test_criterion_6_two_dimension_exponents(report):
    t = time.perf_counter()
    rs = np.logspace(-4, 0, 165)
    best = {}
    ok = True
    for nu, claim, tol in ((0.0, -1, 0.5), (0.5, -1, 0.5), (1.0, -3, 0.7)):
        y = [abs(amplitude_2d(r, nu, 1.0).value) for r in rs]
        rep = claim_report(window_sweep(np.column_stack([rs, y]), 13), claim, tol, min_r_squared=0.98)
        best[nu] = rep.best.exponent
        ok &= rep.status == "pass"
    diff = best[1.0] - best[0.0]
    dt = time.perf_counter() - t
    ok &= abs(diff + 2) <= 0.3 and dt < 60
    shown = {f"nu={k:g}": round(v, 3) for k, v in best.items()}
    assert report(6, ok, f"best_exponents={shown} differential={diff:.3f} time={dt:.2f}s")


def test_criterion_7_three_dimension_scaling_report(report):
    t = time.perf_counter()
    rs = np.logspace(-3, 2, 206)
    worst = 0.0
    statuses = []
    for nu, claim in ((0.5, -4), (0.0, -2)):
        yc = [tangle_from_amplitude(amplitude_3d_smoothed(r, 1.0, math.inf, nu).value, 1.0) for r in rs]
        yq = [tangle_from_amplitude(amplitude_3d_quad(r, nu, 1.0).value, 1.0) for r in rs]
        fc = sorted(window_sweep(np.column_stack([rs, yc]), 9), key=lambda f: f.window)
        fq = sorted(window_sweep(np.column_stack([rs, yq]), 9), key=lambda f: f.window)
        worst = max(worst, max(abs(a.exponent - b.exponent) for a, b in zip(fc, fq)))
        rep = claim_report(fc, claim, 0.3)
        statuses.append(f"nu={nu:g} claim={claim} status={rep.status} best={rep.best.exponent:.3f}")
    dt = time.perf_counter() - t
    ok = worst <= 0.05 and dt < 30
    assert report(7, ok, f"{'; '.join(statuses)} closed_vs_quad_max_diff={worst:.2e} time={dt:.2f}s")


def test_criterion_8_special_functions(report):
    t = time.perf_counter()
    mp.mp.dps = 30
    pairs = [
        (sin_integral(math.pi), mp.si(mp.pi)),
        (cos_integral(1.0), mp.ci(1)),
        (bessel_j0_zeros(1)[0], mp.besseljzero(0, 1)),
        (bessel_j0(1.0), mp.besselj(0, 1)),
    ]
    errs = [abs(float(v) - float(o)) / abs(float(o)) for v, o in pairs]
    dt = time.perf_counter() - t
    assert report(8, max(errs) <= 1e-12 and dt < 1, f"rel_errs={[f'{e:.1e}' for e in errs]} time={dt:.2f}s")


def _scan_fit(tmp_path, tag):
    scan, fit = tmp_path / f"scan{tag}.csv", tmp_path / f"fit{tag}.json"
    assert cli.main(["scan", "--dim", "3", "--nu", "0.5", "--kc", "inf", "--rmin", "10", "--rmax", "100",
                     "--points", "41", "--log", "--output", str(scan)]) == 0
    assert cli.main(["fit", str(scan), "--claimed", "-4", "--windows", "3", "--output", str(fit)]) == 0
    return scan.read_bytes(), fit.read_bytes()


def test_criterion_9_determinism(report, tmp_path):
    first = _scan_fit(tmp_path, "a")
    second = _scan_fit(tmp_path, "b")
    ok = first == second and all(first)
    assert report(9, ok, f"scan_bytes={len(first[0])} fit_bytes={len(first[1])} identical={first == second}")
