"""Jost solutions on the outer region by integral-equation iteration.

Direct initial-value integration of the oscillating solutions is hopeless
here: the system carries an exponential dichotomy at rate kappa >= sqrt(2)
and any seed or roundoff error aligned with the closed channel explodes
like e^{kappa dr}.  Instead each Jost solution is written as

    (phi, psi) = leading profile + Green-kernel corrections,

with all kernels bounded (closed-channel factors appear only through
e^{-kappa |r-t|} weights evaluated with exponentially fitted quadrature)
and the corrections found by Picard iteration.  Two exact splittings of
the same equation are used, matching the regimes where each leading
profile is accurate:

  high (lam >= 0.5):  (Delta - kappa^2 - 1/r^2) phi = (W (phi,psi))_1,
                      (Delta + xi^2   - 1/r^2) psi = (W (phi,psi))_2,
                      W = ((rho^2-1)/<lam>) [[1+2<lam>, -lam], [-lam, -1+2<lam>]],
                      profiles K1/I1(kappa r) and J1/Y1(xi r);

  low  (lam <  0.5):  (Delta - kappa^2 + kappa^2/r^2) phi = (V (phi,psi))_1,
                      (Delta + xi^2) psi = (V (phi,psi))_2,
                      profiles K_imag/I_imag(kappa r) and J0/Y0(xi r).

The node set extends past the working radius by a phase-uniform block and
the remaining DC tail of the truncated kernels is added analytically, so
tail truncation perturbs the solutions' normalization only at second
order in 1/(xi R_far).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp
from scipy.integrate import cumulative_simpson

from .grids import cumexp_left, cumexp_right
from .odesys import Representation, SolutionSample, SpectralPoint
from .profile import VortexProfile
from .special import imag_pair_scaled

MAX_ITER = 160
PICARD_TOL = 1e-12
ACCURACY = 1.0  # global resolution multiplier (refinement studies)


def outer_nodes(sp_: SpectralPoint, r_lo: float, r_hi: float,
                extra=None) -> np.ndarray:
    """Graded near r_lo, oscillation-resolving in the core, phase-uniform
    extension past r_hi."""
    xi = max(sp_.xi, 1e-8)
    h_osc = min(0.22 / max(2 * xi, 1.2), 0.22) / ACCURACY
    nodes = [r_lo]
    r = r_lo
    while r < r_hi:
        r += min(h_osc, max(r / 8.0, 0.01))
        nodes.append(r)
    core = np.array(nodes)
    ext_span = min(36.0 / max(xi, 0.05), 140.0)
    h_ext = min(0.08 / xi, 2.0) / ACCURACY
    ext = np.arange(core[-1] + h_ext, core[-1] + ext_span, h_ext)
    allnodes = np.concatenate([core, ext])
    if extra is not None:
        allnodes = np.concatenate([allnodes, np.asarray(extra, float)])
    allnodes = np.unique(allnodes)
    keep = np.concatenate([[True], np.diff(allnodes) > 1e-9])
    return allnodes[keep]


def _cumsimp_right(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """∫_x^{end} g dt, 4th order, complex-safe."""
    if np.iscomplexobj(g):
        return _cumsimp_right(x, g.real) + 1j * _cumsimp_right(x, g.imag)
    total = cumulative_simpson(g, x=x, initial=0.0)
    return total[-1] - total


def _exp_right(x, g, rate):
    """∫_x^{end} e^{-rate (t-x)} g dt, 3rd order."""
    if np.iscomplexobj(g):
        return cumexp_right(x, g.real, rate) + 1j * cumexp_right(x, g.imag, rate)
    return cumexp_right(x, g, rate)


def _exp_left(x, g, rate):
    """∫_{x0}^x e^{-rate (x-t)} g dt, 3rd order."""
    if np.iscomplexobj(g):
        return cumexp_left(x, g.real, rate) + 1j * cumexp_left(x, g.imag, rate)
    return cumexp_left(x, g, rate)


@dataclass
class _Channels:
    """Homogeneous profiles and residual potential on the node set.

    Closed-channel pair in scaled form: kb = e^{+kappa r} K(kappa r),
    ib = e^{-kappa r} I(kappa r); d* are plain d/dr of the scaled
    functions.  Wronskian convention: r (P_I P_K' - P_I' P_K) = -1 and
    r (S_J S_Y' - S_J' S_Y) = 2/pi in both regimes.
    """
    r: np.ndarray
    kb: np.ndarray
    dkb: np.ndarray
    ib: np.ndarray
    dib: np.ndarray
    sj: np.ndarray
    dsj: np.ndarray
    sy: np.ndarray
    dsy: np.ndarray
    wmat: np.ndarray   # (n, 2, 2)
    c_dc: float        # far source:  (W row2)_22 ~ -c_dc / r^2


def _channels(spt: SpectralPoint, profile: VortexProfile, r: np.ndarray) -> _Channels:
    kap, xi, lam, br = spt.kappa, spt.xi, spt.lam, spt.bracket
    x = kap * r
    y = xi * r
    rho2 = profile.rho_at(r) ** 2
    B = np.array([[1 + 2 * br, -lam], [-lam, -1 + 2 * br]])
    if spt.high_regime:
        k1e, k0e = sp.k1e(x), sp.k0e(x)
        i1e, i0e = sp.i1e(x), sp.i0e(x)
        kb, dkb = k1e, kap * (-k0e - k1e / x + k1e)
        ib, dib = i1e, kap * (i0e - i1e / x - i1e)
        sj, dsj = sp.j1(y), xi * (sp.j0(y) - sp.j1(y) / y)
        sy, dsy = sp.y1(y), xi * (sp.y0(y) - sp.y1(y) / y)
        wmat = ((rho2 - 1.0) / br)[:, None, None] * B[None, :, :]
        c_dc = (2 * br - 1.0) / br
    else:
        # profiles K_imag/I_imag(kappa r) solve (Delta - kappa^2 + 1/r^2);
        # the 1/r^2 complement goes into the residual:
        # (Delta - k^2 + 1/r^2) phi = (2/r^2) phi + ((rho^2-1)/<lam>)(B.)_1
        # (Delta + xi^2)        psi = (1/r^2) psi + ((rho^2-1)/<lam>)(B.)_2
        ibv, dibv, kbv, dkbv = imag_pair_scaled(x)
        kb, dkb = kbv, kap * dkbv
        ib, dib = ibv, kap * dibv
        sj, dsj = sp.j0(y), -xi * sp.j1(y)
        sy, dsy = sp.y0(y), -xi * sp.y1(y)
        wmat = ((rho2 - 1.0) / br)[:, None, None] * B[None, :, :]
        wmat[:, 0, 0] += 2.0 / r ** 2
        wmat[:, 1, 1] += 1.0 / r ** 2
        c_dc = (br - 1.0) / br
    return _Channels(r=r, kb=kb, dkb=dkb, ib=ib, dib=dib, sj=sj, dsj=dsj,
                     sy=sy, dsy=dsy, wmat=wmat, c_dc=c_dc)


def _solve_oscillating(spt: SpectralPoint, ch: _Channels):
    """Complex oscillating Jost solution (phi, psi) ~ (0, H(xi r)).

    psi-row: bounded-at-infinity resolution
        psi = S_H + (pi/2) [S_J CJ - S_Y CY],
        CJ = ∫_r^R t S_Y g2 dt (+ analytic DC tail), CY likewise with S_J.
    phi-row: resolvent kernel -[K(r) ∫_{lo}^r I g1 t dt + I(r) ∫_r^R K g1 t dt].
    """
    r = ch.r
    xi, kap = spt.xi, spt.kappa
    psi = ch.sj + 1j * ch.sy
    dpsi = ch.dsj + 1j * ch.dsy
    phi = np.zeros_like(psi)
    dphi = np.zeros_like(psi)
    use_dc = xi * r[-1] > 2.0
    det_end = ch.sj[-1] * ch.dsy[-1] - ch.dsj[-1] * ch.sy[-1]  # 2/(pi R)
    for _ in range(MAX_ITER):
        g1 = ch.wmat[:, 0, 0] * phi + ch.wmat[:, 0, 1] * psi
        g2 = ch.wmat[:, 1, 0] * phi + ch.wmat[:, 1, 1] * psi
        cj = _cumsimp_right(r, r * ch.sy * g2)
        cy = _cumsimp_right(r, r * ch.sj * g2)
        if use_dc:
            # coefficients of psi against (S_J, S_Y) at the outer end
            aj = (psi[-1] * ch.dsy[-1] - dpsi[-1] * ch.sy[-1]) / det_end
            ay = (-psi[-1] * ch.dsj[-1] + dpsi[-1] * ch.sj[-1]) / det_end
            # DC parts of the dropped ∫_R^∞ with g2 ~ -(c_dc/t^2) psi:
            # <S_J^2> = <S_Y^2> = 1/(pi xi t), <S_J S_Y> = 0
            cj = cj - ch.c_dc * ay / (np.pi * xi * r[-1])
            cy = cy - ch.c_dc * aj / (np.pi * xi * r[-1])
        psi_new = (ch.sj + 1j * ch.sy) + 0.5 * np.pi * (ch.sj * cj - ch.sy * cy)
        dpsi_new = (ch.dsj + 1j * ch.dsy) + 0.5 * np.pi * (ch.dsj * cj - ch.dsy * cy)
        left = _exp_left(r, ch.ib * g1 * r, kap)
        right = _exp_right(r, ch.kb * g1 * r, kap)
        phi_new = -(ch.kb * left + ch.ib * right)
        dphi_new = -((ch.dkb - kap * ch.kb) * left + (ch.dib + kap * ch.ib) * right)
        delta = max(np.max(np.abs(psi_new - psi)), np.max(np.abs(phi_new - phi)))
        psi, dpsi, phi, dphi = psi_new, dpsi_new, phi_new, dphi_new
        if delta < PICARD_TOL * max(np.max(np.abs(psi)), 1e-30):
            break
    else:
        raise RuntimeError("oscillating Jost iteration did not converge")
    return phi, dphi, psi, dpsi


def _solve_decaying(spt: SpectralPoint, ch: _Channels):
    """Decaying Jost solution in scaled variables p = e^{+kappa r} phi,
    s = e^{+kappa r} psi, with p -> kb (i.e. phi = K(kappa r)(1 + ...)).

    phi-row (both integrals from infinity, decay preserved):
        phi_corr = P_K(r) ∫_r^R P_I g1 t dt - P_I(r) ∫_r^R P_K g1 t dt.
    psi-row: oscillating-channel bounded resolution of the e^{-kappa t}
    source.
    """
    r = ch.r
    kap = spt.kappa
    p, dp = ch.kb.copy(), ch.dkb.copy()
    s = np.zeros_like(p)
    ds = np.zeros_like(p)
    for _ in range(MAX_ITER):
        q1 = ch.wmat[:, 0, 0] * p + ch.wmat[:, 0, 1] * s
        q2 = ch.wmat[:, 1, 0] * p + ch.wmat[:, 1, 1] * s
        t_alg = _cumsimp_right(r, ch.ib * q1 * r)           # ∫ P_I g1 t dt
        t_exp = _exp_right(r, ch.kb * q1 * r, 2 * kap)      # e^{2k r}∫ P_K g1 t
        p_new = ch.kb + ch.kb * t_alg - ch.ib * t_exp
        dp_new = ch.dkb + ch.dkb * t_alg - (ch.dib + 2 * kap * ch.ib) * t_exp
        cj = _exp_right(r, r * ch.sy * q2, kap)
        cy = _exp_right(r, r * ch.sj * q2, kap)
        s_new = 0.5 * np.pi * (ch.sj * cj - ch.sy * cy)
        ds_new = 0.5 * np.pi * (ch.dsj * cj - ch.dsy * cy) + kap * s_new
        delta = max(np.max(np.abs(p_new - p)), np.max(np.abs(s_new - s)))
        p, dp, s, ds = p_new, dp_new, s_new, ds_new
        if delta < PICARD_TOL * max(np.max(np.abs(p)), 1e-30):
            break
    else:
        raise RuntimeError("decaying Jost iteration did not converge")
    return p, dp, s, ds


@dataclass
class OuterSolutions:
    """The three Jost trajectories sampled on the outer node set, in UV
    representation.  The decaying one is stored scaled by e^{+kappa r}."""
    sp: SpectralPoint
    nodes: np.ndarray
    dec_scaled: np.ndarray   # (n, 4)
    osc_cos: np.ndarray      # (n, 4)
    osc_sin: np.ndarray      # (n, 4)

    def index_of(self, r: float) -> int:
        i = int(np.argmin(np.abs(self.nodes - r)))
        if abs(self.nodes[i] - r) > 1e-8 * max(1.0, abs(r)):
            raise KeyError(f"radius {r} not in the outer node set")
        return i

    def dec_at(self, r: float) -> np.ndarray:
        i = self.index_of(r)
        kap = self.sp.kappa
        val = self.dec_scaled[i] * np.exp(-kap * self.nodes[i])
        # derivative slots hold d/dr of the e^{+kappa r}-scaled state
        val = val.copy()
        val[1] -= kap * val[0]
        val[3] -= kap * val[2]
        return val

    def state(self, which: str, r: float) -> SolutionSample:
        if which == "decaying":
            val = self.dec_at(r)
        elif which == "osc_cos":
            val = self.osc_cos[self.index_of(r)]
        elif which == "osc_sin":
            val = self.osc_sin[self.index_of(r)]
        else:
            raise ValueError(which)
        return SolutionSample(r=float(r), value=val,
                              representation=Representation.UV)


def _phipsi_to_uv_array(spt: SpectralPoint, phi, dphi, psi, dpsi) -> np.ndarray:
    Minv = spt.m_inverse
    u = Minv[0, 0] * phi + Minv[0, 1] * psi
    du = Minv[0, 0] * dphi + Minv[0, 1] * dpsi
    v = Minv[1, 0] * phi + Minv[1, 1] * psi
    dv = Minv[1, 0] * dphi + Minv[1, 1] * dpsi
    return np.stack([u, du, v, dv], axis=-1)


def build_outer(spt: SpectralPoint, profile: VortexProfile, r_lo: float,
                r_hi: float, extra_radii=None) -> OuterSolutions:
    """Construct the three Jost solutions on [r_lo, ~r_hi + tail]."""
    nodes = outer_nodes(spt, r_lo, r_hi, extra=extra_radii)
    ch = _channels(spt, profile, nodes)
    phi, dphi, psi, dpsi = _solve_oscillating(spt, ch)
    osc = _phipsi_to_uv_array(spt, phi, dphi, psi, dpsi)
    p, dp, s, ds = _solve_decaying(spt, ch)
    dec = _phipsi_to_uv_array(spt, p, dp, s, ds)
    return OuterSolutions(sp=spt, nodes=nodes, dec_scaled=dec,
                          osc_cos=osc.real, osc_sin=osc.imag)
