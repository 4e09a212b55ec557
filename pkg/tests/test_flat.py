import numpy as np
import pytest
from scipy import special as sps
from scipy.integrate import simpson

from vortexdft.eigen import XiGridSpec
from vortexdft.flat import (FlatMultiplier, FlatTransform, e_vec,
                            flat_eigenfunction)
from vortexdft.grids import RadialGrid


@pytest.fixture(scope="module")
def ft():
    grid = RadialGrid.build(r_min=1e-4, r_max=30.0, n_geo=280, n_uni=4600)
    spec = XiGridSpec.for_grid(r_max=30.0, xi_max=5.0, xi_min=1e-3,
                               phase_budget=0.08)
    return FlatTransform(grid, spec)


def test_eigenfunction_values():
    v0 = flat_eigenfunction(0.0, np.array([1.0]))[0]
    assert np.allclose(v0, np.sqrt(np.pi / 4.0) * np.array([1.0, -1.0]))
    xi = 0.7
    v = flat_eigenfunction(xi, np.array([0.0]))[0]
    assert np.allclose(v, np.sqrt(np.pi / 2.0) * e_vec(xi))


def test_zero_mode_annihilated_by_finite_differences():
    # G psi0(0, .) = 0: constant vector (1,-1) direction
    grid = RadialGrid.build(r_min=1e-4, r_max=30.0, n_geo=120, n_uni=600)
    from vortexdft.dft import RadialField, apply_H_flat
    vals = flat_eigenfunction(0.0, grid.nodes).astype(complex)
    out = apply_H_flat(RadialField(grid, vals))
    # boundary stencils on the geometric section leave cancellation noise
    assert grid.norm2(out.values) / grid.norm2(vals) < 1e-9


def test_multiplier_projectors():
    for xi in (0.3, 1.0, 4.0):
        m = FlatMultiplier(xi)
        mp, mm = m.m_plus(), m.m_minus()
        assert np.max(np.abs(mp @ mp - mp)) < 1e-12
        assert np.max(np.abs(mm @ mm - mm)) < 1e-12
        # complementary projectors: the sum is the identity (and hence
        # idempotent: "applied twice equals itself")
        s = mp + mm
        assert np.max(np.abs(s @ s - s)) < 1e-12
        assert np.max(np.abs(s - np.eye(2))) < 1e-12
        # formula structure: m_pm = -+ (lam'/2xi) e(-+xi)[s3 e(-+xi)]^T
        dlam = 2 * (xi ** 2 + 1) / np.sqrt(xi ** 2 + 2)
        ev = e_vec(-xi)
        ref = -(dlam / (2 * xi)) * np.outer(ev, np.array([1.0, -1.0]) * ev)
        assert np.max(np.abs(mp - ref)) < 1e-12


def test_flat_transform_identities(ft):
    r = ft.grid.nodes
    vals = np.stack([np.exp(-r ** 2 / 4.0),
                     -0.4 * np.exp(-r ** 2 / 6.0)], axis=1).astype(complex)
    assert ft.roundtrip_defect(vals) < 1e-6
    assert ft.plancherel_defect(vals, vals) < 1e-6
    assert ft.diag_defect(vals) < 1e-5
    xs = ft.signed_xi()
    bump = np.exp(-((np.abs(xs) - 1.2) / 0.5) ** 2).astype(complex)
    assert ft.spectral_roundtrip_defect(bump) < 1e-6


def test_flat_propagate_identity_and_alpha_sector(ft):
    r = ft.grid.nodes
    a0 = np.exp(-r ** 2 / 4.0)
    vals = np.stack([a0, a0], axis=1).astype(complex)  # alpha0 = a0, beta0 = 0
    out0 = ft.propagate(vals, 0.0)
    assert ft.grid.norm2(out0 - vals) / ft.grid.norm2(vals) < 1e-6
    # alpha sector: alpha(t) = cos(tH) alpha0 for beta0 = 0; closed-form
    # oracle via the order-0 Hankel pair on a fine xi grid
    from vortexdft.grids import simpson_weights
    t = 3.0
    out = ft.propagate(vals, t)
    alpha_t = 0.5 * (out[:, 0] + out[:, 1])
    xi = np.linspace(0.0, 8.0, 4001)
    ahat = sps.j0(np.outer(xi, r)) @ (ft.grid.weights * a0)
    lam = xi * np.sqrt(xi ** 2 + 2.0)
    kern = sps.j0(np.outer(r, xi))
    alpha_oracle = kern @ (simpson_weights(xi) * xi * np.cos(t * lam) * ahat)
    scale = np.max(np.abs(alpha_oracle))
    assert np.max(np.abs(alpha_t.imag)) < 1e-6 * scale
    assert np.max(np.abs(alpha_t.real - alpha_oracle)) < 1e-5 * scale


def test_flat_phase_rule_refusal(ft):
    r = ft.grid.nodes
    vals = np.stack([np.exp(-r ** 2 / 4.0), 0 * r], axis=1).astype(complex)
    with pytest.raises(ValueError):
        ft.propagate(vals, 1e5)


def test_cross_check_flat_self_test():
    # deviation metric evaluates ~0 when the field is the flat model itself
    from types import SimpleNamespace
    from vortexdft.flat import cross_check
    grid = RadialGrid.build(r_min=1e-4, r_max=60.0, n_geo=80, n_uni=900)
    xi = 10.0
    vals = (np.cos(xi * grid.nodes - np.pi / 4)
            / np.sqrt(xi * grid.nodes))[:, None] * e_vec(xi)[None, :]
    table = SimpleNamespace(xi=np.array([xi]), psi=vals[None, :, :], grid=grid)
    assert cross_check(xi, table, n_phase=720) < 2e-4
