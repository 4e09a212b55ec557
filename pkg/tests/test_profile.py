import numpy as np
import pytest
from scipy.integrate import solve_ivp

from vortexdft.profile import (kernel_solutions, load_profile,
                               resonance_vectors, rho_tail, save_profile,
                               shoot_slope)

# frozen derived value: two independent methods (bisection shooting and
# collocation) agree on the origin slope to 1e-9
SLOPE_A = 0.5831894959


def independent_slope_oracle() -> float:
    """Plain bisection shooting, implemented independently of the module."""
    def rhs(r, y):
        return [y[1], -y[1] / r + y[0] / r ** 2 - (1.0 - y[0] ** 2) * y[0]]

    def classify(a):
        r0 = 1e-4
        y0 = [a * (r0 - r0 ** 3 / 8), a * (1 - 3 * r0 ** 2 / 8)]

        def over(r, y):
            return y[0] - (1 + 1e-13)
        over.terminal = True
        over.direction = 1.0

        def under(r, y):
            return y[1]
        under.terminal = True
        under.direction = -1.0
        s = solve_ivp(rhs, (r0, 42.0), y0, method="DOP853", rtol=1e-12,
                      atol=1e-15, events=(over, under))
        return 1 if s.t_events[0].size else (-1 if s.t_events[1].size else 0)

    lo, hi = 0.5, 0.7
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if classify(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_slope_against_independent_oracle(profile60):
    oracle = independent_slope_oracle()
    assert abs(oracle - SLOPE_A) < 1e-6
    assert abs(profile60.slope_a - SLOPE_A) < 1e-8
    assert abs(profile60.slope_a - oracle) < 1e-6


def test_shooting_matches_collocation(profile60):
    assert abs(shoot_slope() - profile60.slope_a) < 1e-9


def test_frobenius_slope_at_first_node(profile60):
    r0 = profile60.grid.r_min
    assert profile60.rho_at(r0) / r0 == pytest.approx(profile60.slope_a,
                                                      abs=1e-6)


def test_far_field_value(profile60):
    assert abs(1.0 - profile60.rho_at(10.0) - 0.005) < 5e-4


def test_monotone_and_bounded(profile60):
    assert np.all(profile60.drho > 0)
    assert np.all((profile60.rho >= 0) & (profile60.rho < 1.0))
    assert profile60.rho_at(profile60.grid.r_min) <= 1e-3


def test_algebraic_tail_constant(profile60):
    r = np.linspace(10.0, 55.0, 200)
    dev = np.abs(1.0 - profile60.rho_at(r) - 0.5 / r ** 2) * r ** 4
    # fitted C in |1 - rho - 1/(2 r^2)| <= C / r^4 stays near 9/8
    assert np.max(dev) < 2.0
    assert abs(np.median(dev) - 9.0 / 8.0) < 0.4
    assert abs(rho_tail(30.0) - profile60.rho_at(30.0)) < 1e-7


def test_rho_squared_decay_rates(profile60):
    # |d^k (rho^2 - 1)| <= C_k / (1+r)^{2+k} for k = 0,1,2
    r = np.linspace(1.0, 55.0, 5001)
    h = r[1] - r[0]
    w = profile60.rho_at(r) ** 2 - 1.0
    d1 = np.gradient(w, h, edge_order=2)
    d2 = np.gradient(d1, h, edge_order=2)
    for k, arr in enumerate((w, d1, d2)):
        ratio = np.abs(arr[5:-5]) * (1 + r[5:-5]) ** (2 + k)
        # a finite C_k exists and the tail does not outgrow the core rate
        assert np.max(ratio) < 40.0
        core = np.max(ratio[r[5:-5] < 10.0])
        tail = np.max(ratio[r[5:-5] > 20.0])
        assert tail <= 1.2 * core


def test_resonance_vectors_definition(profile60):
    pair = resonance_vectors(profile60)
    assert np.allclose(pair.xi0[:, 0], profile60.rho)
    assert np.allclose(pair.xi0[:, 1], -profile60.rho)
    assert np.allclose(pair.xi1[:, 0], pair.xi1[:, 1])


def test_kernel_solutions(profile60):
    grid = profile60.grid
    ks = kernel_solutions(profile60)
    i1 = grid.index_of(1.0)
    assert ks.p0[i1] == pytest.approx(0.0, abs=1e-14)
    assert grid.nodes[0] * ks.q0_tilde[0] == pytest.approx(0.5, abs=0.01)
    assert np.all(ks.q0[1:] > 0) and np.all(ks.q0_tilde > 0)
    c = [np.log(ks.q0[grid.index_of(s)]) - np.sqrt(2) * s + 0.5 * np.log(s)
         for s in (15.0, 20.0)]
    # both sit within +-0.05 of the shared asymptotic constant
    assert abs(c[0] - c[1]) < 0.1


def test_kernel_residuals(profile60):
    # L0 P0 = 0 and (L0 - 2 rho^2) Q = 0, differenced on the native nodes
    from vortexdft.grids import fornberg_weights
    grid = profile60.grid
    ks = kernel_solutions(profile60)
    idx = [grid.index_of(r) for r in np.linspace(1.0, 25.0, 60)]
    rho2 = profile60.rho_at(grid.nodes) ** 2
    for vals, coef in ((ks.p0, 1.0 - rho2), (ks.q0, 1.0 - 3 * rho2),
                       (ks.q0_tilde, 1.0 - 3 * rho2)):
        worst = 0.0
        for i in idx:
            sl = slice(i - 3, i + 4)
            x = grid.nodes[sl]
            r0 = grid.nodes[i]
            d1 = fornberg_weights(x, r0, 1) @ vals[sl]
            d2 = fornberg_weights(x, r0, 2) @ vals[sl]
            res = d2 + d1 / r0 - vals[i] / r0 ** 2 + coef[i] * vals[i]
            worst = max(worst, abs(res) / (abs(vals[i]) + 1.0))
        assert worst < 2e-5


def test_derivative_identity(profile60):
    # (L0 - 2 rho^2)(r rho') = 2 (rho^2 - 1) rho with radius-proportional
    # stencils (the equation has a regular singular point at 0)
    from vortexdft.verify import prmidv_residual
    assert prmidv_residual(profile60) < 1e-6


def test_l0_rho_residual(profile60):
    r = np.linspace(0.5, 50.0, 40001)  # dense interpolant, 4th-order FD
    h = r[1] - r[0]
    rho = profile60.rho_at(r)
    d1 = (-rho[4:] + 8 * rho[3:-1] - 8 * rho[1:-3] + rho[:-4]) / (12 * h)
    d2 = (-rho[4:] + 16 * rho[3:-1] - 30 * rho[2:-2] + 16 * rho[1:-3]
          - rho[:-4]) / (12 * h ** 2)
    mid = slice(2, -2)
    res = d2 + d1 / r[mid] - rho[mid] / r[mid] ** 2 + (1 - rho[mid] ** 2) * rho[mid]
    assert np.max(np.abs(res)) < 1e-8


def test_cache_roundtrip(tmp_path, profile60):
    path = tmp_path / "profile.bin"
    save_profile(path, profile60)
    back = load_profile(path)
    assert np.array_equal(back.rho, profile60.rho)
    assert np.array_equal(back.grid.nodes, profile60.grid.nodes)
    assert back.slope_a == profile60.slope_a
    # deterministic bytes
    path2 = tmp_path / "profile2.bin"
    save_profile(path2, profile60)
    assert path.read_bytes() == path2.read_bytes()
