"""Distorted Fourier transform, its inverse, and the operator identities.

Conventions (bilinear sigma3-pairing throughout, not sesquilinear):

    F phi (xi)  = ∫ psi(xi, r) . sigma3 phi(r) r dr
    Finv zeta(r) = (1/pi) ∫ zeta(xi) psi(xi, r) lam'(xi) sign(xi) dxi.

The signed-xi integral is folded onto the positive half through
psi(-xi, r) = -sigma1 psi(xi, r); the integrand extends continuously by 0
to xi = 0, which is included as a quadrature node.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import EigenTable
from .grids import RadialGrid, derivative_matrix, simpson_weights
from .profile import VortexProfile

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass
class RadialField:
    """Complex 2-vector field on the radial grid."""
    grid: RadialGrid
    values: np.ndarray  # (nr, 2)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.grid.nodes.size, 2):
            raise ValueError("field shape does not match the grid")

    def norm(self, s: float = 0.0) -> float:
        return self.grid.norm2(self.values, s=s)

    def even_part(self) -> "RadialField":
        return RadialField(self.grid, 0.5 * (self.values + self.values[:, ::-1]))

    def odd_part(self) -> "RadialField":
        return RadialField(self.grid, 0.5 * (self.values - self.values[:, ::-1]))

    def sigma1(self) -> "RadialField":
        return RadialField(self.grid, self.values[:, ::-1])


@dataclass
class SpectralDensity:
    """Complex function on the signed frequency grid of a table."""
    xi: np.ndarray        # signed, ascending: [-xi_max..-xi_min, xi_min..xi_max]
    values: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.xi.shape:
            raise ValueError("density shape does not match the xi grid")

    @property
    def n_pos(self) -> int:
        return self.xi.size // 2

    def pos(self) -> np.ndarray:
        return self.values[self.n_pos:]

    def neg_rev(self) -> np.ndarray:
        """values at -xi_j, ordered by increasing xi_j."""
        return self.values[:self.n_pos][::-1]

    def even_part(self) -> np.ndarray:
        return 0.5 * (self.pos() + self.neg_rev())

    def odd_part(self) -> np.ndarray:
        return 0.5 * (self.pos() - self.neg_rev())

    def weighted_norm(self, xi_weights: np.ndarray) -> tuple:
        """|| zeta_e ||_{L2(|xi| dxi)} + || |xi|^{-1} <xi> zeta_o ||_{L2(|xi| dxi)}.

        The |xi|^{-1} weight is regularized by dropping the node nearest 0;
        returns (norm, excluded_mass)."""
        xi = self.xi[self.n_pos:]
        ze, zo = self.even_part(), self.odd_part()
        w = xi_weights
        even = np.sqrt(2.0 * np.sum(w * xi * np.abs(ze) ** 2))
        wgt = (1.0 + xi ** 2) / xi ** 2
        odd_full = 2.0 * w * xi * wgt * np.abs(zo) ** 2
        excl = float(np.sqrt(odd_full[0]))
        odd = np.sqrt(np.sum(odd_full[1:]))
        return float(even + odd), excl


def signed_xi(table: EigenTable) -> np.ndarray:
    return np.concatenate([-table.xi[::-1], table.xi])


def xi_weights(table: EigenTable) -> np.ndarray:
    """Weights over the positive nodes for ∫_0^inf f dxi, including the
    extension of the integrand by its (vanishing) limit at xi = 0."""
    nodes = np.concatenate([[0.0], table.xi])
    return simpson_weights(nodes)[1:]


def forward(field: RadialField, table: EigenTable) -> SpectralDensity:
    """F phi on the signed grid; the far-grid tail contribution of the
    field is bounded and reported on the density."""
    if field.grid.nodes.shape != table.grid.nodes.shape or \
            not np.allclose(field.grid.nodes, table.grid.nodes):
        raise ValueError("field grid does not match the table grid")
    w = table.grid.weights
    s3phi = field.values * np.array([1.0, -1.0])
    pos = np.einsum("jik,ik->j", table.psi, w[:, None] * s3phi)
    s3s1phi = field.values[:, ::-1] * np.array([1.0, -1.0])
    neg = np.einsum("jik,ik->j", table.psi, w[:, None] * s3s1phi)
    values = np.concatenate([neg[::-1], pos])
    # tail budget: |psi| <~ (xi r)^{-1/2} envelope outside the grid
    r_edge = table.grid.r_max
    amp_edge = float(np.max(np.abs(field.values[-8:])))
    tail = amp_edge * r_edge ** 1.5 / max(np.sqrt(np.min(table.xi)), 1e-6)
    return SpectralDensity(xi=signed_xi(table), values=values,
                           tail_bound=tail)


def inverse(density: SpectralDensity, table: EigenTable,
            multiplier: np.ndarray | None = None) -> RadialField:
    """Finv zeta, optionally with a diagonal multiplier m(xi) applied
    (used by the evolution group: m = e^{i t lam})."""
    if density.xi.size != 2 * table.nxi:
        raise ValueError("density grid does not match the table grid")
    zp = density.pos()
    zm = density.neg_rev()
    if multiplier is not None:
        mp = multiplier[table.nxi:]
        mm = multiplier[:table.nxi][::-1]
        zp = zp * mp
        zm = zm * mm
    w = xi_weights(table) * table.dlam()
    # (1/pi) ∫_0^inf lam' [ zeta(xi) psi(xi,r) + zeta(-xi) sigma1 psi(xi,r) ] dxi
    coef_plus = w * zp
    coef_minus = w * zm
    vals = np.einsum("j,jik->ik", coef_plus, table.psi)
    vals = vals + np.einsum("j,jik->ik", coef_minus, table.psi)[:, ::-1]
    return RadialField(table.grid, vals / np.pi)


_DERIV_CACHE: dict = {}


def _derivatives(grid: RadialGrid):
    key = id(grid)
    if key not in _DERIV_CACHE:
        _DERIV_CACHE[key] = (derivative_matrix(grid.nodes, 1, npts=7),
                             derivative_matrix(grid.nodes, 2, npts=7))
    return _DERIV_CACHE[key]


def apply_H(field: RadialField, profile: VortexProfile) -> RadialField:
    """H phi by 7-point finite differences for Delta - 1/r^2 plus the exact
    multiplication operators; boundary rows use one-sided stencils (their
    degraded accuracy is suppressed by the r dr measure)."""
    grid = field.grid
    d1, d2 = _derivatives(grid)
    r = grid.nodes
    u, v = field.values[:, 0], field.values[:, 1]
    lap_u = d2 @ u + (d1 @ u) / r - u / r ** 2
    lap_v = d2 @ v + (d1 @ v) / r - v / r ** 2
    w = profile.rho_at(r) ** 2 - 1.0
    hu = -lap_u + u + v + w * (2.0 * u + v)
    hv = lap_v - v - u + w * (-u - 2.0 * v)
    return RadialField(grid, np.stack([hu, hv], axis=1))


def apply_H_flat(field: RadialField) -> RadialField:
    """The constant-background operator [[-Delta+1, 1], [-1, Delta-1]]
    acting on radial 2-vector fields (no 1/r^2 term)."""
    grid = field.grid
    d1, d2 = _derivatives(grid)
    r = grid.nodes
    u, v = field.values[:, 0], field.values[:, 1]
    lap_u = d2 @ u + (d1 @ u) / r
    lap_v = d2 @ v + (d1 @ v) / r
    hu = -lap_u + u + v
    hv = lap_v - v - u
    return RadialField(grid, np.stack([hu, hv], axis=1))


def diag_defect(field: RadialField, table: EigenTable,
                profile: VortexProfile) -> float:
    """|| F(H phi) - lam F(phi) || / || F(H phi) || over the signed grid."""
    fh = forward(apply_H(field, profile), table)
    f = forward(field, table)
    lam_signed = np.concatenate([-table.lam()[::-1], table.lam()])
    w2 = np.concatenate([xi_weights(table)[::-1], xi_weights(table)])
    num = np.sqrt(np.sum(w2 * np.abs(fh.values - lam_signed * f.values) ** 2))
    den = np.sqrt(np.sum(w2 * np.abs(fh.values) ** 2))
    if den == 0:
        return 0.0
    return float(num / den)


def plancherel_defect(f1: RadialField, f2: RadialField,
                      table: EigenTable) -> float:
    """| pi ∫ sigma3 f1 . f2 r dr - ∫ F f1 F f2 lam' sign xi dxi |, relative."""
    lhs = np.pi * f1.grid.inner(f1.values * np.array([1.0, -1.0]), f2.values)
    z1, z2 = forward(f1, table), forward(f2, table)
    w = xi_weights(table) * table.dlam()
    rhs = np.sum(w * (z1.pos() * z2.pos() - z1.neg_rev() * z2.neg_rev()))
    scale = max(abs(lhs), abs(rhs))
    if scale == 0:
        return 0.0
    return float(abs(lhs - rhs) / scale)


def roundtrip_defect(field: RadialField, table: EigenTable) -> float:
    """Relative L2 defect of inverse(forward(phi)) against phi."""
    back = inverse(forward(field, table), table)
    return float(field.grid.norm2(back.values - field.values)
                 / max(field.grid.norm2(field.values), 1e-300))


def spectral_roundtrip_defect(density: SpectralDensity,
                              table: EigenTable) -> float:
    """Relative weighted-L2 defect of forward(inverse(zeta)) against zeta."""
    back = forward(inverse(density, table), table)
    w2 = np.concatenate([xi_weights(table)[::-1], xi_weights(table)])
    num = np.sqrt(np.sum(w2 * np.abs(back.values - density.values) ** 2))
    den = np.sqrt(np.sum(w2 * np.abs(density.values) ** 2))
    return float(num / den)


def zero_frequency_value(field: RadialField, table: EigenTable) -> complex:
    """The xi -> 0 limit of F phi from the stored resonance pairing."""
    w = table.grid.weights
    s3phi = field.values * np.array([1.0, -1.0])
    return complex(np.sum(w[:, None] * table.psi0 * s3phi))

def zero_frequency_slope(field: RadialField, table: EigenTable) -> complex:
    """The xi -> 0 limit of d/dxi F phi from the stored generalized pair,
    sqrt(pi/8) <phi, sigma3 Xi1>."""
    w = table.grid.weights
    s3phi = field.values * np.array([1.0, -1.0])
    return complex(np.sum(w[:, None] * table.dpsi0 * s3phi))
