import numpy as np
import pytest

from vortexdft.jost import build_outer
from vortexdft.odesys import (SolutionSample, SpectralPoint, integrate,
                              wronskian)


@pytest.mark.parametrize("lam", [0.05, 0.49, 0.51, 4.0, 60.0])
def test_oscillating_pair_short_span_consistency(profile60, lam):
    # the built trajectories solve the true system: re-integrating a short
    # span (kappa * span ~ 3, below the dichotomy budget) reproduces them
    sp = SpectralPoint.from_lambda(lam)
    r_lo = min(max(2.0, 2.0 / max(sp.xi, 1e-9)), 8 / sp.kappa) * 0.7
    outer = build_outer(sp, profile60, r_lo=r_lo, r_hi=60.0)
    n = outer.nodes
    ja = np.searchsorted(n, 20.0)
    jb = np.searchsorted(n, n[ja] - 3.0 / sp.kappa)
    tr = integrate(sp, profile60, outer.state("osc_cos", n[ja]), n[jb])
    err = np.max(np.abs(tr.at(n[jb]) - outer.osc_cos[jb])) \
        / np.max(np.abs(outer.osc_cos[jb]))
    assert err < 3e-5


@pytest.mark.parametrize("lam", [0.05, 0.8, 4.0])
def test_decaying_solution_inward_consistency(profile60, lam):
    # inward integration is the stable direction for the decaying branch
    sp = SpectralPoint.from_lambda(lam)
    r_lo = min(max(2.0, 2.0 / max(sp.xi, 1e-9)), 8 / sp.kappa) * 0.7
    outer = build_outer(sp, profile60, r_lo=r_lo, r_hi=60.0)
    n = outer.nodes
    ia = np.searchsorted(n, 25.0)
    ib = np.searchsorted(n, max(r_lo * 1.2, 6.0 / sp.kappa))
    st = outer.state("decaying", n[ia])
    scale = np.max(np.abs(st.value))
    tr = integrate(sp, profile60,
                   SolutionSample(r=n[ia], value=st.value / scale), n[ib])
    err = np.max(np.abs(tr.at(n[ib]) * scale - outer.dec_at(n[ib]))) \
        / np.max(np.abs(outer.dec_at(n[ib])))
    assert err < 1e-4


@pytest.mark.parametrize("lam", [0.05, 0.49, 4.0, 60.0])
def test_oscillating_wronskian_value(profile60, lam):
    # W(O_cos, O_sin) is r-independent and equals its far-field limit
    # -(2/pi) a_+/(2<lam>), which pins the pair's joint normalization
    sp = SpectralPoint.from_lambda(lam)
    r_lo = min(max(2.0, 2.0 / max(sp.xi, 1e-9)), 8 / sp.kappa) * 0.7
    outer = build_outer(sp, profile60, r_lo=r_lo, r_hi=60.0)
    n = outer.nodes
    radii = n[np.searchsorted(n, 25.0):np.searchsorted(n, 45.0):9]
    ws = np.array([wronskian(outer.state("osc_cos", r),
                             outer.state("osc_sin", r)) for r in radii])
    pred = -2.0 / np.pi * sp.a_plus / (2.0 * sp.bracket)
    assert (ws.max() - ws.min()) / abs(pred) < 1e-6
    assert ws.mean() / pred == pytest.approx(1.0, abs=5e-4)


def test_decaying_h_corrections_are_small(profile60):
    # phi = K(kappa r)(1 + O(1/r)), psi-part subleading
    sp = SpectralPoint.from_lambda(4.0)
    outer = build_outer(sp, profile60, r_lo=1.5, r_hi=60.0)
    from scipy import special as sps
    i = np.searchsorted(outer.nodes, 30.0)
    r = outer.nodes[i]
    from vortexdft.odesys import Representation, convert
    st = convert(outer.state("decaying", r), sp, Representation.PHIPSI)
    kref = sps.k1(sp.kappa * r)
    assert st.value[0] / kref == pytest.approx(1.0, abs=0.05)
    assert abs(st.value[2] / st.value[0]) < 0.05
