"""The eigenvalue ODE in its equivalent forms, fundamental seeds and
adaptive integration.

States are 4-vectors (u, u', v, v') in the UV representation or
(phi, phi', psi, psi') in the PhiPsi representation; the two are linked by
the constant 2x2 matrix

    (phi, psi) = M (u, v),   M = [[1/a+, 1], [-1, -a-]],

whose inverse is  [[1, -a+], [a+, 1]] / (2<lam>).

The eigenvalue equation in UV variables reads

    Delta u = u/r^2 + (2 rho^2 - 1 - lam) u + rho^2 v
    Delta v = v/r^2 + (2 rho^2 - 1 + lam) v + rho^2 u.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .profile import VortexProfile
from .special import BesselFamily, bessel, imag_pair_raw

LAMBDA_SWITCH = 0.5  # PhiPsi leading profiles switch between the two regimes


class Representation(enum.Enum):
    UV = "uv"
    PHIPSI = "phipsi"


@dataclass(frozen=True)
class SpectralPoint:
    """Frequency bundle for one lambda > 0 (use symmetry for lambda < 0)."""

    lam: float
    xi: float
    kappa: float
    dlam: float                 # lambda'(xi) = 2 (xi^2+1)/sqrt(xi^2+2)
    e_vec: np.ndarray           # unit far-field direction
    a_plus: float
    a_minus: float
    bracket: float              # <lam> = sqrt(1 + lam^2)

    @classmethod
    def from_xi(cls, xi: float) -> "SpectralPoint":
        lam = xi * np.sqrt(xi ** 2 + 2.0)
        return cls.from_lambda(lam)

    @classmethod
    def from_lambda(cls, lam: float) -> "SpectralPoint":
        br = np.hypot(1.0, lam)
        kappa = np.sqrt(1.0 + br)
        xi = lam / kappa  # == sign(lam) sqrt(<lam> - 1), cancellation-free
        a_plus = lam + br
        a_minus = lam - br
        dlam = 2.0 * (xi ** 2 + 1.0) / np.sqrt(xi ** 2 + 2.0)
        e = np.array([a_plus, -1.0]) / np.sqrt(2.0 * br * a_plus)
        return cls(lam=float(lam), xi=float(xi), kappa=float(kappa),
                   dlam=float(dlam), e_vec=e, a_plus=float(a_plus),
                   a_minus=float(a_minus), bracket=float(br))

    @property
    def m_matrix(self) -> np.ndarray:
        return np.array([[1.0 / self.a_plus, 1.0], [-1.0, -self.a_minus]])

    @property
    def m_inverse(self) -> np.ndarray:
        return np.array([[1.0, -self.a_plus], [self.a_plus, 1.0]]) / (2.0 * self.bracket)

    @property
    def c_factor(self) -> float:
        """Signed C with M^{-1} (0,1)^T = C e; here C = -sqrt(a+/(2<lam>))."""
        return -np.sqrt(self.a_plus / (2.0 * self.bracket))

    @property
    def high_regime(self) -> bool:
        return self.lam >= LAMBDA_SWITCH


@dataclass(frozen=True)
class SolutionSample:
    """State 4-vector at one radius."""
    r: float
    value: np.ndarray  # (u,u',v,v') or (phi,phi',psi,psi')
    representation: Representation = Representation.UV


def convert(sample: SolutionSample, sp: SpectralPoint,
            target: Representation) -> SolutionSample:
    """Exact change of representation (M is r-independent)."""
    if sample.representation is target:
        return sample
    M = sp.m_matrix if target is Representation.PHIPSI else sp.m_inverse
    u, du, v, dv = sample.value
    a, b = M @ np.array([u, v])
    da, db = M @ np.array([du, dv])
    return SolutionSample(r=sample.r, value=np.array([a, da, b, db]),
                          representation=target)


def state_uv_rhs(sp: SpectralPoint, profile: VortexProfile):
    lam = sp.lam

    def rhs(r, y):
        rho2 = profile.rho2_scalar(r)
        u, du, v, dv = y
        cu = (2.0 * rho2 - 1.0 - lam)
        cv = (2.0 * rho2 - 1.0 + lam)
        return np.array([
            du,
            -du / r + u / r ** 2 + cu * u + rho2 * v,
            dv,
            -dv / r + v / r ** 2 + cv * v + rho2 * u,
        ])
    return rhs


def seed_origin(sp: SpectralPoint, profile: VortexProfile, which: int,
                r0: float) -> SolutionSample:
    """Frobenius seed (u,v) = r e_which + O(r^3) expanded through r^5."""
    if r0 > 0.05:
        raise ValueError("origin seeds are accurate only for r0 <= 0.05")
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    lam, a2 = sp.lam, profile.slope_a ** 2
    k1, k2 = (1.0, 0.0) if which == 1 else (0.0, 1.0)
    u3 = -(1.0 + lam) * k1 / 8.0
    v3 = -(1.0 - lam) * k2 / 8.0
    u5 = (a2 * (2 * k1 + k2) - (1.0 + lam) * u3) / 24.0
    v5 = (a2 * (2 * k2 + k1) - (1.0 - lam) * v3) / 24.0
    u = k1 * r0 + u3 * r0 ** 3 + u5 * r0 ** 5
    du = k1 + 3 * u3 * r0 ** 2 + 5 * u5 * r0 ** 4
    v = k2 * r0 + v3 * r0 ** 3 + v5 * r0 ** 5
    dv = k2 + 3 * v3 * r0 ** 2 + 5 * v5 * r0 ** 4
    return SolutionSample(r=r0, value=np.array([u, du, v, dv]))


def jost_profiles(sp: SpectralPoint):
    """Leading (phi, psi) profile functions per regime.

    Returns callables f(r) -> (val, d/dr val) for the decaying profile
    K(kappa r) and the oscillating pair; order-1 Bessel in the high regime,
    order-0 / imaginary-order in the low regime.
    """
    kap, xi = sp.kappa, sp.xi
    if sp.high_regime:
        dec = lambda r: (bessel(BesselFamily.K, 1, kap * r),
                         kap * bessel(BesselFamily.K, 1, kap * r, True))
        cos_ = lambda r: (bessel(BesselFamily.J, 1, xi * r),
                          xi * bessel(BesselFamily.J, 1, xi * r, True))
        sin_ = lambda r: (bessel(BesselFamily.Y, 1, xi * r),
                          xi * bessel(BesselFamily.Y, 1, xi * r, True))
    else:
        def dec(r):
            vi, dvi, vk, dvk = imag_pair_raw(kap * np.asarray(r, float))
            return vk, kap * dvk
        cos_ = lambda r: (bessel(BesselFamily.J, 0, xi * r),
                          xi * bessel(BesselFamily.J, 0, xi * r, True))
        sin_ = lambda r: (bessel(BesselFamily.Y, 0, xi * r),
                          xi * bessel(BesselFamily.Y, 0, xi * r, True))
    return dec, cos_, sin_


def seed_jost(sp: SpectralPoint, kind: str, R: float) -> SolutionSample:
    """Leading Jost seed at radius R, returned in UV representation.

    decaying: (phi, psi) = K(kappa r)(1, 0); osc_cos / osc_sin:
    (phi, psi) = (0, J/Y(xi r)).  Corrections of order 1/(xi + y) are
    dropped, hence the preconditions on xi R / kappa R.
    """
    dec, cos_, sin_ = jost_profiles(sp)
    if kind == "decaying":
        if sp.kappa * R < 20:
            raise ValueError("decaying seed needs kappa R >= 20")
        val, dval = dec(R)
        state = np.array([val, dval, 0.0, 0.0], dtype=float)
    elif kind in ("osc_cos", "osc_sin"):
        if sp.xi * R < 20:
            raise ValueError("oscillating seed needs xi R >= 20")
        val, dval = (cos_ if kind == "osc_cos" else sin_)(R)
        state = np.array([0.0, 0.0, val, dval], dtype=float)
    else:
        raise ValueError(f"unknown Jost kind {kind!r}")
    sample = SolutionSample(r=R, value=state, representation=Representation.PHIPSI)
    return convert(sample, sp, Representation.UV)


@dataclass
class Trajectory:
    """Dense solution of the eigenvalue ODE between two radii."""
    sp: SpectralPoint
    sol: object  # scipy OdeSolution
    r_lo: float
    r_hi: float

    def at(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any((r < self.r_lo - 1e-12) | (r > self.r_hi + 1e-12)):
            raise ValueError("radius outside the integrated span")
        return self.sol(np.clip(r, self.r_lo, self.r_hi))

    def sample(self, r: float) -> SolutionSample:
        return SolutionSample(r=float(r), value=self.at(float(r)))


def integrate(sp: SpectralPoint, profile: VortexProfile, seed: SolutionSample,
              r_target: float, tol: float = 1e-11) -> Trajectory:
    """Adaptive DOP853 integration of the UV 4-system, dense output."""
    seed = convert(seed, sp, Representation.UV)
    rhs = state_uv_rhs(sp, profile)
    scale = float(np.max(np.abs(seed.value)))
    sol = solve_ivp(rhs, (seed.r, r_target), seed.value, method="DOP853",
                    rtol=tol, atol=1e-15 * max(scale, 1e-280),
                    dense_output=True)
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    if np.max(np.abs(sol.y[:, -1])) > 1e120:
        raise OverflowError("growing mode overflow; wrong integration direction?")
    lo, hi = min(seed.r, r_target), max(seed.r, r_target)
    return Trajectory(sp=sp, sol=sol.sol, r_lo=lo, r_hi=hi)


def wronskian(a: SolutionSample, b: SolutionSample) -> float:
    """W(F, G) = F'.G - G'.F on the sqrt(r)-conjugated states.

    F = sqrt(r)(u, v); constant along r for two solutions at the same
    lambda (real bilinear dot product, also valid componentwise complex).
    """
    if abs(a.r - b.r) > 1e-12:
        raise ValueError("samples must be at the same radius")
    if a.representation is not Representation.UV or b.representation is not Representation.UV:
        raise ValueError("wronskian expects UV representation")
    r = a.r
    ua, dua, va, dva = a.value
    ub, dub, vb, dvb = b.value
    fa = np.array([ua, va])
    dfa = np.array([dua, dva]) * np.sqrt(r) + fa / (2 * np.sqrt(r))
    fb = np.array([ub, vb])
    dfb = np.array([dub, dvb]) * np.sqrt(r) + fb / (2 * np.sqrt(r))
    fa = fa * np.sqrt(r)
    fb = fb * np.sqrt(r)
    return dfa @ fb - dfb @ fa
