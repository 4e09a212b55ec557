"""Closed-form oracle: the same pipeline for the linearization around the
constant solution 1.

Here the generalized eigenfunctions are exactly

    psi0(xi, r) = sqrt(pi/2) J0(xi r) e(xi),

so the transforms reduce to order-0 Hankel transforms with the lam'(xi)
spectral weight, evaluated with the same grid quadrature as the vortex
pipeline (identical error model, no fast-Hankel shortcuts).  Eigenfunction
blocks are generated on the fly instead of being tabulated, which keeps
arbitrarily dense oracle grids cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sps

from .eigen import XiGridSpec
from .grids import RadialGrid, simpson_weights
from .odesys import SpectralPoint

SIGMA3_DIAG = np.array([1.0, -1.0])


def e_vec(xi):
    """Far-field direction e(xi), vectorized over xi (either sign)."""
    xi = np.asarray(xi, dtype=float)
    lam = xi * np.sqrt(xi ** 2 + 2.0)
    br = np.hypot(1.0, lam)
    ap = lam + br
    out = np.stack([ap, -np.ones_like(ap)], axis=-1)
    return out / np.sqrt(2.0 * br * ap)[..., None]


def flat_eigenfunction(xi: float, r) -> np.ndarray:
    """sqrt(pi/2) J0(xi r) e(xi); accepts array r."""
    r = np.asarray(r, dtype=float)
    return np.sqrt(np.pi / 2.0) * sps.j0(xi * r)[..., None] * e_vec(xi)


@dataclass(frozen=True)
class FlatMultiplier:
    """Half-group symbols of the constant-background evolution.

    m_pm(xi) = -+ (lam'(xi)/(2 xi)) e(-+xi) [sigma3 e(-+xi)]^T; each
    half of the sum (1/2)(e^{+itH} M_+ + e^{-itH} M_-) is a projector.
    """
    xi: float

    def h_symbol(self) -> float:
        return self.xi * np.sqrt(self.xi ** 2 + 2.0)

    def u_symbol(self) -> float:
        return self.xi / np.sqrt(2.0 + self.xi ** 2)

    def m_plus(self) -> np.ndarray:
        return self._m(+1)

    def m_minus(self) -> np.ndarray:
        return self._m(-1)

    def _m(self, sign: int) -> np.ndarray:
        xi = self.xi
        dlam = 2.0 * (xi ** 2 + 1.0) / np.sqrt(xi ** 2 + 2.0)
        ev = e_vec(-sign * xi)
        return -sign * (dlam / (2.0 * xi)) * np.outer(ev, SIGMA3_DIAG * ev)


class FlatTransform:
    """Streamed order-0 Hankel pipeline on (grid, xi-grid)."""

    def __init__(self, grid: RadialGrid, xi_spec: XiGridSpec,
                 block: int = 256):
        self.grid = grid
        self.xi = xi_spec.positive_nodes()
        self.spec = xi_spec
        self.block = block
        self._wxi = simpson_weights(np.concatenate([[0.0], self.xi]))[1:]
        self._dlam = 2.0 * (self.xi ** 2 + 1.0) / np.sqrt(self.xi ** 2 + 2.0)
        self._epos = e_vec(self.xi)          # (nxi, 2)

    @property
    def nxi(self) -> int:
        return self.xi.size

    def signed_xi(self) -> np.ndarray:
        return np.concatenate([-self.xi[::-1], self.xi])

    def _blocks(self):
        for a in range(0, self.nxi, self.block):
            b = min(a + self.block, self.nxi)
            J = sps.j0(self.xi[a:b, None] * self.grid.nodes[None, :])
            yield a, b, np.sqrt(np.pi / 2.0) * J

    def forward(self, values: np.ndarray) -> np.ndarray:
        """F phi on the signed grid for a (nr, 2) field."""
        w = self.grid.weights
        s3 = values * SIGMA3_DIAG
        s3s1 = values[:, ::-1] * SIGMA3_DIAG
        pos = np.empty(self.nxi, dtype=complex)
        neg = np.empty(self.nxi, dtype=complex)
        for a, b, J in self._blocks():
            proj_p = self._epos[a:b] @ (w[:, None] * s3).T
            proj_m = self._epos[a:b] @ (w[:, None] * s3s1).T
            pos[a:b] = np.einsum("ji,ji->j", J, proj_p)
            neg[a:b] = np.einsum("ji,ji->j", J, proj_m)
        return np.concatenate([neg[::-1], pos])

    def inverse(self, zeta: np.ndarray, multiplier=None) -> np.ndarray:
        """Finv zeta as a (nr, 2) field; optional diagonal multiplier on
        the signed grid."""
        n = self.nxi
        zp = zeta[n:].copy()
        zm = zeta[:n][::-1].copy()
        if multiplier is not None:
            zp *= multiplier[n:]
            zm *= multiplier[:n][::-1]
        w = self._wxi * self._dlam
        out = np.zeros((self.grid.nodes.size, 2), dtype=complex)
        for a, b, J in self._blocks():
            coef_p = (w[a:b] * zp[a:b])[:, None] * self._epos[a:b]
            coef_m = (w[a:b] * zm[a:b])[:, None] * self._epos[a:b]
            out += J[:, :].T @ coef_p
            out += (J[:, :].T @ coef_m)[:, ::-1]
        return out / np.pi

    def roundtrip_defect(self, values: np.ndarray) -> float:
        back = self.inverse(self.forward(values))
        return float(self.grid.norm2(back - values)
                     / max(self.grid.norm2(values), 1e-300))

    def spectral_roundtrip_defect(self, zeta: np.ndarray) -> float:
        back = self.forward(self.inverse(zeta))
        w2 = np.concatenate([self._wxi[::-1], self._wxi])
        num = np.sqrt(np.sum(w2 * np.abs(back - zeta) ** 2))
        den = np.sqrt(np.sum(w2 * np.abs(zeta) ** 2))
        return float(num / den)

    def plancherel_defect(self, v1: np.ndarray, v2: np.ndarray) -> float:
        lhs = np.pi * self.grid.inner(v1 * SIGMA3_DIAG, v2)
        z1, z2 = self.forward(v1), self.forward(v2)
        n = self.nxi
        w = self._wxi * self._dlam
        rhs = np.sum(w * (z1[n:] * z2[n:] - z1[:n][::-1] * z2[:n][::-1]))
        scale = max(abs(lhs), abs(rhs))
        return float(abs(lhs - rhs) / scale) if scale else 0.0

    def diag_defect(self, values: np.ndarray) -> float:
        from .dft import RadialField, apply_H_flat
        hv = apply_H_flat(RadialField(self.grid, values)).values
        zh = self.forward(hv)
        z = self.forward(values)
        lam = self.xi * np.sqrt(self.xi ** 2 + 2.0)
        lam_signed = np.concatenate([-lam[::-1], lam])
        w2 = np.concatenate([self._wxi[::-1], self._wxi])
        num = np.sqrt(np.sum(w2 * np.abs(zh - lam_signed * z) ** 2))
        den = np.sqrt(np.sum(w2 * np.abs(zh) ** 2))
        return float(num / den) if den else 0.0

    def propagate(self, values: np.ndarray, t: float) -> np.ndarray:
        """e^{it H_flat} via Finv e^{it lam} F; caller must respect the
        phase-resolution rule (checked here)."""
        lam = self.xi * np.sqrt(self.xi ** 2 + 2.0)
        dlam = self._dlam
        dxi = np.diff(self.xi)
        inc = abs(t) * dlam[1:] * dxi
        if np.max(inc) > np.pi / 4.0:
            raise ValueError("xi grid does not resolve the phase at this t")
        lam_signed = np.concatenate([-lam[::-1], lam])
        mult = np.exp(1j * t * lam_signed)
        return self.inverse(self.forward(values), multiplier=mult)


def alpha_beta_evolution(xi: np.ndarray, alpha0: np.ndarray,
                         beta0: np.ndarray, t: float):
    """Closed-form scalar-sector evolution:
    alpha(t) = cos(tH) alpha0 + sin(tH) U beta0,
    beta(t)  = -sin(tH) U^{-1} alpha0 + cos(tH) beta0 (hat-side symbols)."""
    H = xi * np.sqrt(xi ** 2 + 2.0)
    U = xi / np.sqrt(2.0 + xi ** 2)
    a = np.cos(t * H) * alpha0 + np.sin(t * H) * U * beta0
    b = -np.sin(t * H) / np.where(U == 0, np.inf, U) * alpha0 + np.cos(t * H) * beta0
    return a, b


def cross_check(xi: float, table, n_phase: int = 64) -> float:
    """Far-field deviation of the vortex eigenfunction from the flat one,
    modulo a fitted phase shift; expected O(1/xi).

    Both are unit-normalized far fields; the comparison window is
    xi r >= 10 on the table grid.
    """
    j = int(np.argmin(np.abs(table.xi - xi)))
    xi_t = float(table.xi[j])
    r = table.grid.nodes
    win = xi_t * r >= 10.0
    if not np.any(win):
        raise ValueError("no far-field window on this grid")
    rr = r[win]
    vals = table.psi[j][win]
    best = np.inf
    for delta in np.linspace(0.0, 2.0 * np.pi, n_phase, endpoint=False):
        model = np.cos(xi_t * rr - np.pi / 4.0 + delta)[:, None] \
            / np.sqrt(xi_t * rr)[:, None] * e_vec(xi_t)[None, :]
        for sgn in (1.0, -1.0):
            dev = np.sqrt(np.sum((vals - sgn * model) ** 2)
                          / np.sum(model ** 2))
            best = min(best, float(dev))
    return best
