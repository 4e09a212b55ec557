import numpy as np
import pytest
from scipy.integrate import solve_ivp

from vortexdft.special import (BesselFamily, bessel, hankel1, imag_pair_raw,
                               imag_pair_scaled, r_star)

F = BesselFamily


def test_series_values_at_origin():
    assert bessel(F.J, 0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert bessel(F.J, 1, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_cylinder_wronskian_value_at_3():
    # r (J1 Y1' - J1' Y1) = 2/pi; at x=3 the magnitude is 2/(3 pi).
    # (The reversed orientation Y1 J1' - Y1' J1 carries the opposite sign.)
    x = 3.0
    w = bessel(F.J, 1, x) * bessel(F.Y, 1, x, True) \
        - bessel(F.J, 1, x, True) * bessel(F.Y, 1, x)
    assert w == pytest.approx(2.0 / (3.0 * np.pi), rel=1e-12)


def test_wronskian_identities_across_range():
    r = np.linspace(0.1, 50.0, 700)
    for order in (0, 1):
        wjy = bessel(F.J, order, r) * bessel(F.Y, order, r, True) \
            - bessel(F.J, order, r, True) * bessel(F.Y, order, r)
        assert np.max(np.abs(r * wjy - 2.0 / np.pi)) < 1e-10
        wik = bessel(F.I, order, r) * bessel(F.K, order, r, True) \
            - bessel(F.I, order, r, True) * bessel(F.K, order, r)
        assert np.max(np.abs(r * wik + 1.0)) < 1e-10


@pytest.mark.parametrize("family,order,sign", [
    (F.J, 0, +1.0), (F.J, 1, +1.0), (F.Y, 0, +1.0), (F.Y, 1, +1.0),
    (F.I, 0, -1.0), (F.I, 1, -1.0), (F.K, 0, -1.0), (F.K, 1, -1.0),
])
def test_defining_ode_residual(family, order, sign):
    # Delta f + sign f - (order^2/r^2) f = 0 under 4th-order differencing
    r = np.linspace(1.0, 20.0, 8001)
    h = r[1] - r[0]
    f = bessel(family, order, r)
    d1 = (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
    d2 = (-f[4:] + 16 * f[3:-1] - 30 * f[2:-2] + 16 * f[1:-3] - f[:-4]) / (12 * h ** 2)
    mid = slice(2, -2)
    res = d2 + d1 / r[mid] + sign * f[mid] - order ** 2 * f[mid] / r[mid] ** 2
    assert np.max(np.abs(res) / (np.abs(f[mid]) + 1.0)) < 1e-8


def test_j0_corner_function_bounded():
    r = np.linspace(1e-4, 1.0, 2001)
    g = (bessel(F.J, 0, r) - 1.0) / r ** 2
    h = r[1] - r[0]
    d1 = np.gradient(g, h, edge_order=2)
    d2 = np.gradient(d1, h, edge_order=2)
    for arr, bound in ((g, 0.3), (d1, 0.2), (d2, 0.2)):
        assert np.max(np.abs(arr[5:-5])) < bound


def test_hankel_modulus_and_phase():
    x = 50.0
    assert abs(hankel1(0, x)) == pytest.approx(np.sqrt(2 / (np.pi * x)), rel=0.02)
    z = hankel1(0, x) * np.sqrt(np.pi * x / 2) * np.exp(-1j * (x - np.pi / 4))
    assert abs(z - 1.0) < 0.01
    assert hankel1(1, 1.0) == pytest.approx(
        bessel(F.J, 1, 1.0) + 1j * bessel(F.Y, 1, 1.0), rel=1e-14)


def test_hankel_modulus_monotone_sampled():
    # brute-force sampling of the implemented function
    x = np.linspace(1.0, 100.0, 100)
    mod = np.abs(hankel1(0, x))
    assert np.all(np.diff(mod) < 0)


def test_imag_pair_asymptotics_against_ode_oracle():
    # oracle: integrate Delta f - f + f/r^2 = 0 from the asymptotic seed at
    # x = 200 down to 30 and compare the decaying solution with K_imag
    def rhs(x, y):
        return [y[1], -y[1] / x + y[0] - y[0] / x ** 2]
    x0 = 200.0
    amp = np.sqrt(np.pi / (2 * x0)) * np.exp(-x0)
    seed = [amp, -amp * (1.0 + 0.5 / x0)]
    sol = solve_ivp(rhs, (x0, 30.0), seed, rtol=1e-10, atol=1e-300,
                    dense_output=True)
    oracle = sol.sol(30.0)[0]
    mine = bessel(F.K_IMAG, 0, 30.0)
    assert mine / (np.exp(-30.0) / np.sqrt(60.0 / np.pi)) == pytest.approx(1.0, abs=0.05)
    assert mine == pytest.approx(oracle, rel=2e-3)


def test_imag_pair_wronskian_and_growth():
    x = np.linspace(1.0, 40.0, 500)
    vi, dvi, vk, dvk = imag_pair_raw(x)
    assert np.max(np.abs(x * (vi * dvk - dvi * vk) + 1.0)) < 1e-8
    ib, _, kb, _ = imag_pair_scaled(np.array([30.0, 300.0]))
    assert ib[0] * np.sqrt(2 * np.pi * 30.0) == pytest.approx(1.0, abs=0.05)
    assert kb[1] / np.sqrt(np.pi / 600.0) == pytest.approx(1.0, abs=0.01)


def test_r_star_is_published_positivity_threshold():
    rs = r_star()
    assert 0.05 < rs < 2.0
    x = np.linspace(rs + 1e-3, 50.0, 2000)
    vi, _, vk, _ = imag_pair_raw(x)
    assert np.all(vi > 0) and np.all(vk > 0)
    below = np.linspace(0.05, rs - 1e-3, 500)
    vi_b, _, vk_b, _ = imag_pair_raw(below)
    assert min(np.min(vi_b), np.min(vk_b)) < 0


def test_domain_errors():
    with pytest.raises(ValueError):
        bessel(F.Y, 0, 0.0)
    with pytest.raises(ValueError):
        bessel(F.K, 1, -1.0)
    with pytest.raises(ValueError):
        bessel(F.K_IMAG, 0, 0.05)
    with pytest.raises(ValueError):
        bessel(F.J, 2, 1.0)


def test_overflow_signaled_for_large_i():
    with pytest.raises(OverflowError):
        bessel(F.I, 0, 1e4)
