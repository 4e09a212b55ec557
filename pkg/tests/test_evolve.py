import numpy as np
import pytest

from vortexdft.dft import RadialField, SpectralDensity, forward, inverse, signed_xi, xi_weights
from vortexdft.evolve import (PhaseResolutionError, fit_decay,
                              model_integral, model_integral_brute,
                              orthogonality, project_out_pairing, propagate,
                              stationary_point)

SQRT2 = np.sqrt(2.0)


def band_data(table, band=0.5, even_zero=False):
    xs = signed_xi(table)
    amp = np.exp(-(xs / band) ** 2)
    if even_zero:
        amp = (xs / band) ** 2 * amp
    dens = SpectralDensity(xi=xs, values=amp.astype(complex))
    f = inverse(dens, table)
    return RadialField(f.grid, f.values.real.astype(complex))


def test_propagate_identity_at_t0(table30):
    f = band_data(table30)
    res = propagate(f, 0.0, table30)
    defect = f.grid.norm2(res.field.values - f.values) / f.grid.norm2(f.values)
    assert defect < 5e-3
    assert res.l2_norm == pytest.approx(f.grid.norm2(f.values), rel=5e-3)


def test_energy_sector_isometry(table30):
    # unimodular multiplier: the even-sector weighted norm is conserved
    # exactly at the density level
    f = band_data(table30)
    z = forward(f, table30)
    w = xi_weights(table30)
    t = 7.3
    lam = table30.lam()
    ze0 = 0.5 * (z.pos() + z.neg_rev())
    zp = z.pos() * np.exp(1j * t * lam)
    zm = z.neg_rev() * np.exp(-1j * t * lam)
    zet = 0.5 * (zp + zm)
    n0 = np.sum(w * lam * np.abs(ze0) ** 2)
    nt = np.sum(w * lam * np.abs(zet) ** 2)
    assert nt == pytest.approx(n0, rel=1e-12)


def test_group_property(table30):
    f = band_data(table30)
    one = propagate(propagate(f, 2.0, table30).field, 3.0, table30).field
    two = propagate(f, 5.0, table30).field
    assert f.grid.norm2(one.values - two.values) / f.grid.norm2(two.values) < 1e-2


def test_sigma1_conjugation(table30):
    f = band_data(table30)
    lhs = propagate(RadialField(f.grid, f.values[:, ::-1]), 4.0, table30)
    rhs = propagate(f, -4.0, table30)
    diff = f.grid.norm2(lhs.field.values - rhs.field.values[:, ::-1])
    assert diff / f.grid.norm2(f.values) < 1e-2


def test_orthogonality_pairings(profile30, grid30):
    rho = profile30.rho
    r = grid30.nodes
    g = np.exp(-r ** 2 / 9.0)
    # (rho, -rho) g pairs to zero with (rho, rho) pointwise
    f = RadialField(grid30, np.stack([rho * g, -rho * g], axis=1).astype(complex))
    p1, p2 = orthogonality(f, profile30)
    assert abs(p1) < 1e-14 * grid30.norm2(f.values)
    # Xi1 pairing equals the direct quadrature oracle
    s = r * profile30.drho + rho
    f2 = RadialField(grid30, np.stack([s, s], axis=1).astype(complex))
    q1, q2 = orthogonality(f2, profile30)
    oracle = np.sum(grid30.weights * 2.0 * rho * s)
    assert q1 == pytest.approx(oracle, rel=1e-12)
    zero = RadialField(grid30, np.zeros((r.size, 2), dtype=complex))
    assert orthogonality(zero, profile30) == (0j, 0j)


def test_pairing_is_conserved(table30, profile30):
    f = band_data(table30, even_zero=True)
    f = project_out_pairing(f, profile30)
    p0, _ = orthogonality(f, profile30)
    scale = f.grid.norm2(f.values) * profile30.grid.norm2(
        np.stack([profile30.rho, profile30.rho], axis=1))
    assert abs(p0) / scale < 1e-12
    res = propagate(f, 8.0, table30)
    pt, _ = orthogonality(res.field, profile30)
    assert abs(pt) / scale < 1e-3


def test_fit_decay_synthetic():
    t = np.geomspace(5.0, 120.0, 9)
    slope, r2 = fit_decay(t, 3.2 / t)
    assert slope == pytest.approx(-1.0, abs=1e-12)
    assert r2 == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        fit_decay([1.0, 2.0], [1.0, 0.5])


def test_phase_resolution_guard(table30):
    f = band_data(table30)
    with pytest.raises(PhaseResolutionError):
        propagate(f, 1e5, table30)


def test_stationary_point():
    assert stationary_point(50.0, 0.5 * 50.0) is None
    x0 = stationary_point(50.0, SQRT2 * 50.0)
    assert abs(x0) < 1e-6
    x1 = stationary_point(50.0, 1.6 * 50.0)
    dlam = 2 * (x1 ** 2 + 1) / np.sqrt(x1 ** 2 + 2)
    assert dlam == pytest.approx(1.6, rel=1e-12)


@pytest.mark.parametrize("ratio", [0.5, SQRT2, 1.6])
def test_model_integral_against_brute_force(ratio):
    phi = lambda x: np.exp(-4.0 * x ** 2)
    env = lambda x, r: (1.0 + (x * r) ** 2) ** -0.25
    t = 50.0
    a = model_integral(t, ratio * t, phi, env)
    b = model_integral_brute(t, ratio * t, phi, env)
    assert abs(a - b) <= 1e-6 * max(abs(b), 1e-9)


def test_model_integral_off_cone_decay():
    phi = lambda x: np.exp(-4.0 * x ** 2)
    env = lambda x, r: (1.0 + (x * r) ** 2) ** -0.25
    base = abs(model_integral(25.0, 12.5, phi, env)) * 25.0
    for t in (50.0, 100.0):
        assert abs(model_integral(t, 0.5 * t, phi, env)) * t <= 2.0 * base
