import math

import numpy as np
import pytest

from bathtangle.continuum import amplitude_1d_numeric
from bathtangle.model import (
    BathConfig,
    ConfigError,
    DiscreteBath,
    KGrid,
    Mode,
    line_grid,
    plane_wave_bath,
    random_plane_wave_bath,
    spherical_grid,
    validate,
)
from bathtangle.perturb import discrete_amplitude


def test_validate_accepts_reference_config():
    validate(BathConfig(3, 0.5, 1.0, 100.0, 1.0))


@pytest.mark.parametrize("cfg, message", [
    (BathConfig(1, 0.25, 1.0, 100.0), "2nu must be integer in d=1"),
    (BathConfig(2, 1.0, 1.0, 0.5), "kc <= k0"),
    (BathConfig(4, 1.0), "dimension"),
    (BathConfig(3, -1.0), "nu"),
    (BathConfig(3, 0.5, 0.0), "k0"),
    (BathConfig(3, 0.5, g=-1.0), "g"),
])
def test_validate_reports_violation(cfg, message):
    with pytest.raises(ConfigError, match=message):
        validate(cfg)


def test_validate_reports_first_violation():
    with pytest.raises(ConfigError, match="dimension"):
        validate(BathConfig(5, 0.25, -1.0, 0.5))


def test_mode_rejects_nonpositive_frequency():
    with pytest.raises(ValueError):
        Mode(0.0, 1.0, 1.0)


def test_discrete_bath_round_trip_and_immutability():
    modes = [Mode(1.0, 0.5, 0.5j), Mode(2.0, 0.1, -0.2)]
    bath = DiscreteBath.from_modes(1.5, modes)
    assert bath.n_modes == 2
    assert bath.modes == modes
    with pytest.raises(ValueError):
        bath.omega[0] = 3.0


def test_discrete_bath_shape_checks():
    with pytest.raises(ValueError):
        DiscreteBath(1.0, [1.0, 2.0], [1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        DiscreteBath(0.0, [1.0], [1.0], [1.0])


def test_kgrid_rejects_empty_and_bad_weights():
    with pytest.raises(ValueError):
        KGrid(np.zeros((0, 1)), [])
    with pytest.raises(ValueError):
        KGrid([1.0, 2.0], [1.0, -1.0])


def test_zero_separation_gives_equal_couplings():
    cfg = BathConfig(3, 0.5, 1.0, 10.0)
    bath = plane_wave_bath(cfg, 0.0, spherical_grid(10.0, 20, 8))
    assert np.array_equal(bath.lambda_alpha, bath.lambda_beta)
    a = discrete_amplitude(bath)
    assert a.imag == 0 and a.real > 0


def test_zero_coupling_prefactor():
    bath = plane_wave_bath(BathConfig(1, 0.0, 1.0, 10.0, 0.0), 1.0, line_grid(10.0, 50))
    assert not np.any(bath.lambda_alpha) and not np.any(bath.lambda_beta)


def test_plane_wave_law():
    cfg = BathConfig(1, 1.0, 2.0, 10.0, 0.7)
    grid = line_grid(10.0, 10)
    bath = plane_wave_bath(cfg, 1.3, grid)
    k = grid.vectors[:, 0]
    expected = 0.7 * np.abs(k) * np.sqrt(grid.weights)
    assert np.allclose(bath.lambda_alpha, expected, rtol=1e-15)
    assert np.allclose(bath.lambda_beta, expected * np.exp(1j * k * 1.3), rtol=1e-15)
    assert bath.omega0 == 2.0


def test_plane_wave_rejects_bad_input():
    cfg = BathConfig(1, 0.0, 1.0, 5.0)
    with pytest.raises(ValueError):
        plane_wave_bath(cfg, -1.0, line_grid(5.0, 10))
    with pytest.raises(ValueError):
        plane_wave_bath(cfg, 1.0, line_grid(6.0, 10))
    with pytest.raises(ValueError):
        plane_wave_bath(cfg, 1.0, KGrid([0.0, 1.0], [1.0, 1.0]))


def test_site_swap_conjugates_products():
    bath = random_plane_wave_bath(4, 1.0, 0.3, 0.8, seed=5)
    a = discrete_amplitude(bath)
    b = discrete_amplitude(bath.swapped())
    assert b == np.conj(a)


def test_plane_wave_bath_is_deterministic():
    cfg = BathConfig(3, 0.5, 1.0, 10.0)
    g = spherical_grid(10.0, 30)
    a, b = plane_wave_bath(cfg, 1.0, g), plane_wave_bath(cfg, 1.0, g)
    assert np.array_equal(a.lambda_beta, b.lambda_beta) and np.array_equal(a.omega, b.omega)


def test_one_dimensional_riemann_sum_converges_first_order():
    cfg = BathConfig(1, 0.0, 1.0, 10.0)
    r = 1.0
    ref = amplitude_1d_numeric(r, 0, 1.0, "abs_k", kc=10.0).value / (2 * math.pi)
    errs = [abs(discrete_amplitude(plane_wave_bath(cfg, r, line_grid(10.0, n))) - ref)
            for n in (200, 400, 800)]
    for e1, e2 in zip(errs, errs[1:]):
        assert 1.7 <= e1 / e2 <= 2.3
