"""Vortex profile rho and profile-derived objects.

The profile solves

    rho'' + rho'/r - rho/r^2 + (1 - rho^2) rho = 0,   rho(0)=0, rho(inf)=1.

It is the separatrix between solutions that overshoot 1 and solutions that
crash back to 0, which pins the origin slope a.  Construction is a
bisection shoot on the slope followed by a collocation polish of the whole
profile (pure shooting cannot track the separatrix much past r ~ 25 in
double precision).

Also provided: the resonance pair Xi0 = (rho, -rho), Xi1 = (r rho' + rho)(1,1),
and the kernel solutions P0 of L0 and Q0, Q0~ of L0 - 2 rho^2.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_bvp, solve_ivp
from scipy.interpolate import BPoly, CubicSpline

from .grids import RadialGrid

# algebraic tail 1 - rho = 1/(2 r^2) + 9/(8 r^4) + (161/16)/r^6 + O(r^-8)
_TAIL_C = (0.5, 9.0 / 8.0, 161.0 / 16.0)

PROFILE_FORMAT_VERSION = 1


def rho_tail(r):
    c2, c4, c6 = _TAIL_C
    return 1.0 - c2 / r ** 2 - c4 / r ** 4 - c6 / r ** 6


def rho_tail_deriv(r):
    c2, c4, c6 = _TAIL_C
    return 2 * c2 / r ** 3 + 4 * c4 / r ** 5 + 6 * c6 / r ** 7


@dataclass(frozen=True)
class VortexProfile:
    grid: RadialGrid
    rho: np.ndarray
    drho: np.ndarray
    slope_a: float
    _spline: CubicSpline = None
    _dspline: CubicSpline = None
    _dense: object = None   # collocation interpolant (rho, rho'), if available

    def rho2_scalar(self, r: float) -> float:
        """Fast in-grid rho^2 lookup for ODE right-hand sides."""
        if r <= self.grid.r_max:
            if self._dense is not None:
                return float(self._dense(r)[0]) ** 2
            return float(self._spline(r)) ** 2
        return float(rho_tail(r)) ** 2

    def rho_at(self, r):
        """rho evaluated anywhere in (0, r_max] (tail formula beyond)."""
        r = np.asarray(r, dtype=float)
        rc = np.minimum(r, self.grid.r_max)
        inner = self._dense(rc)[0] if self._dense is not None else self._spline(rc)
        out = np.where(r <= self.grid.r_max, inner, rho_tail(np.maximum(r, 1.0)))
        return out if out.shape else float(out)

    def drho_at(self, r):
        r = np.asarray(r, dtype=float)
        rc = np.minimum(r, self.grid.r_max)
        inner = self._dense(rc)[1] if self._dense is not None else self._dspline(rc)
        out = np.where(r <= self.grid.r_max, inner, rho_tail_deriv(np.maximum(r, 1.0)))
        return out if out.shape else float(out)

    def content_hash(self) -> str:
        import hashlib
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.grid.nodes).tobytes())
        h.update(np.ascontiguousarray(self.rho).tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class ResonancePair:
    """Xi0 = (rho, -rho)^T, Xi1 = (r rho' + rho)(1, 1)^T on the grid."""
    xi0: np.ndarray  # (nr, 2)
    xi1: np.ndarray  # (nr, 2)


@dataclass(frozen=True)
class KernelSolutions:
    """P0 with L0 P0 = 0; Q0, Q0~ with (L0 - 2 rho^2) Q = 0 on the grid."""
    p0: np.ndarray
    q0: np.ndarray
    dq0: np.ndarray
    q0_tilde: np.ndarray


class ShootingError(RuntimeError):
    pass


class _DenseProfile:
    """Quintic Hermite interpolants of rho and rho' on the collocation
    mesh, each seeded with ODE-consistent higher derivatives."""

    def __init__(self, x, rho, drho, ddrho, dddrho):
        self._q = BPoly.from_derivatives(x, np.stack([rho, drho, ddrho], axis=1))
        self._d = BPoly.from_derivatives(x, np.stack([drho, ddrho, dddrho], axis=1))

    def __call__(self, r):
        return np.stack([self._q(r), self._d(r)])


def _rho_rhs(r, y):
    rho, drho = y
    return [drho, -drho / r + rho / r ** 2 - (1.0 - rho ** 2) * rho]


def _classify_shot(a: float, r_stop: float = 40.0) -> int:
    """+1 if the slope-a shot overshoots 1, -1 if it turns back down."""
    r0 = 1e-3
    y0 = [a * (r0 - r0 ** 3 / 8.0), a * (1.0 - 3 * r0 ** 2 / 8.0)]

    def over(r, y):
        return y[0] - (1.0 + 1e-12)
    over.terminal = True
    over.direction = 1.0

    def under(r, y):
        return y[1]
    under.terminal = True
    under.direction = -1.0

    sol = solve_ivp(_rho_rhs, (r0, r_stop), y0, method="DOP853",
                    rtol=1e-12, atol=1e-14, events=(over, under))
    if sol.t_events[0].size:
        return +1
    if sol.t_events[1].size:
        return -1
    return 0  # still on the separatrix at r_stop


def shoot_slope(lo: float = 0.3, hi: float = 1.0, max_iter: int = 80) -> float:
    """Bisect the origin slope between overshoot and crash-back."""
    if _classify_shot(lo) != -1 or _classify_shot(hi) != +1:
        raise ShootingError("initial slope bracket does not straddle the separatrix")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        c = _classify_shot(mid)
        if c >= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def solve_profile(grid: RadialGrid, tol: float = 1e-10) -> VortexProfile:
    """Shoot for the slope, then collocation-polish the full profile.

    The boundary conditions of the polish are the Frobenius relation
    r rho' = rho (1 - r^2/4 ...) at r_min and the algebraic tail at r_max.
    """
    if grid.r_max < 40:
        raise ValueError("profile grid must extend to r_max >= 40")
    a_shoot = shoot_slope()

    # initial guess: shot solution to r=12 stitched to the algebraic tail
    r0 = 1e-3
    y0 = [a_shoot * (r0 - r0 ** 3 / 8.0), a_shoot * (1.0 - 3 * r0 ** 2 / 8.0)]
    # smoothly graded mesh: relative spacing near the singular point,
    # capped absolute spacing in the bulk (no spacing jumps: the collocation
    # interpolant's defect concentrates wherever the mesh grading breaks)
    mesh = [grid.r_min]
    while mesh[-1] < grid.r_max:
        mesh.append(mesh[-1] + min(0.026 * mesh[-1], 0.03))
    mesh[-1] = grid.r_max
    mesh = np.array(mesh)
    shot = solve_ivp(_rho_rhs, (r0, 12.0), y0, method="DOP853",
                     rtol=1e-12, atol=1e-14, dense_output=True)
    guess = np.empty((2, mesh.size))
    inner = mesh <= 12.0
    lowr = mesh < r0
    guess[:, inner] = shot.sol(np.clip(mesh[inner], r0, 12.0))
    guess[0, lowr] = a_shoot * mesh[lowr]
    guess[1, lowr] = a_shoot
    guess[0, ~inner] = rho_tail(mesh[~inner])
    guess[1, ~inner] = rho_tail_deriv(mesh[~inner])

    def fun(r, y):
        return np.vstack([y[1], -y[1] / r + y[0] / r ** 2 - (1 - y[0] ** 2) * y[0]])

    def bc(ya, yb):
        r_lo, r_hi = mesh[0], mesh[-1]
        return np.array([
            r_lo * ya[1] - ya[0] * (1.0 - r_lo ** 2 / 4.0),
            yb[0] - rho_tail(r_hi),
        ])

    sol = solve_bvp(fun, bc, mesh, guess, tol=min(tol, 1e-10),
                    max_nodes=400000)
    if not sol.success:
        raise ShootingError(f"profile collocation failed: {sol.message}")

    # ODE-consistent quintic Hermite through the collocation mesh: second
    # derivatives from the equation itself push the interpolant's defect
    # down to ~1e-9, well under the nodal accuracy requirement
    xm, (rhom, drhom) = sol.x, sol.y
    ddrhom = -drhom / xm + rhom / xm ** 2 - (1 - rhom ** 2) * rhom
    dddrhom = (-ddrhom / xm + 2 * drhom / xm ** 2 - 2 * rhom / xm ** 3
               + (3 * rhom ** 2 - 1) * drhom)
    dense = _DenseProfile(xm, rhom, drhom, ddrhom, dddrhom)

    rho = dense(grid.nodes)[0]
    drho = dense(grid.nodes)[1]
    slope_a = float(dense(grid.r_min)[0] / (grid.r_min * (1 - grid.r_min ** 2 / 8.0)))
    spline = CubicSpline(grid.nodes, rho)
    dspline = CubicSpline(grid.nodes, drho)
    return VortexProfile(grid=grid, rho=rho, drho=drho, slope_a=slope_a,
                         _spline=spline, _dspline=dspline, _dense=dense)


def resonance_vectors(profile: VortexProfile) -> ResonancePair:
    r = profile.grid.nodes
    xi0 = np.stack([profile.rho, -profile.rho], axis=1)
    s = r * profile.drho + profile.rho
    xi1 = np.stack([s, s], axis=1)
    return ResonancePair(xi0=xi0, xi1=xi1)


def _q0_rhs(profile):
    def rhs(r, y):
        q, dq = y
        rho2 = profile.rho_at(r) ** 2
        return [dq, -dq / r + q / r ** 2 - (1.0 - 3.0 * rho2) * q]
    return rhs


def _gauss_increments(nodes: np.ndarray, f) -> np.ndarray:
    """Per-interval 4-point Gauss-Legendre integrals of a dense callable."""
    gx, gw = np.polynomial.legendre.leggauss(4)
    a, b = nodes[:-1], nodes[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    pts = mid[:, None] + half[:, None] * gx[None, :]
    vals = f(pts.ravel()).reshape(pts.shape)
    return half * (vals @ gw)


def _cum_gauss(nodes: np.ndarray, f) -> np.ndarray:
    """Cumulative ∫_{nodes[0]}^{nodes[i]} f dt, h^8-local accuracy."""
    return np.concatenate([[0.0], np.cumsum(_gauss_increments(nodes, f))])


def _cum_gauss_right(nodes: np.ndarray, f) -> np.ndarray:
    """∫_{nodes[i]}^{nodes[-1]} f dt accumulated from the right (no
    cancellation against a large left mass)."""
    incr = _gauss_increments(nodes, f)
    return np.concatenate([np.cumsum(incr[::-1])[::-1], [0.0]])


def kernel_solutions(profile: VortexProfile) -> KernelSolutions:
    """P0 by its defining integral, Q0 by outward shooting, Q0~ by
    reduction of order with the exponential tail beyond r_max."""
    grid = profile.grid
    r = grid.nodes
    if grid.r_max > 450:
        raise ValueError("Q0 ~ e^{sqrt(2) r} overflows beyond r ~ 450")

    # P0(r) = rho(r) * ∫_1^r ds/(s rho(s)^2); integrand ~ 1/(a^2 s^3) near 0
    cum = _cum_gauss(r, lambda s: 1.0 / (s * profile.rho_at(s) ** 2))
    i1 = grid.index_of(1.0)
    if abs(r[i1] - 1.0) > 1e-12:
        raise RuntimeError("grid must contain the node r = 1")
    p0 = profile.rho * (cum - cum[i1])

    # Q0: regular solution ~ r - r^3/8 at the origin, integrated outward
    r0 = r[0]
    y0 = [r0 - r0 ** 3 / 8.0, 1.0 - 3.0 * r0 ** 2 / 8.0]
    sol = solve_ivp(_q0_rhs(profile), (r0, r[-1]), y0, method="DOP853",
                    rtol=1e-12, atol=1e-14, t_eval=r, dense_output=True)
    if not sol.success:
        raise RuntimeError("Q0 integration failed")
    q0, dq0 = sol.y

    # Q0~ = Q0(r) ∫_r^inf ds/(s Q0^2); tail ∫_R^inf = 1/(2 sqrt2 R Q0(R)^2)
    cumright = _cum_gauss_right(r, lambda s: 1.0 / (s * sol.sol(s)[0] ** 2))
    tail = 1.0 / (2.0 * np.sqrt(2.0) * r[-1] * q0[-1] ** 2)
    q0_tilde = q0 * (cumright + tail)
    return KernelSolutions(p0=p0, q0=q0, dq0=dq0, q0_tilde=q0_tilde)


# ---------------------------------------------------------------------------
# cache file: versioned columnar (node, rho, rho') with a JSON header line
# ---------------------------------------------------------------------------

def save_profile(path, profile: VortexProfile, tol: float = 1e-10) -> None:
    header = {
        "format_version": PROFILE_FORMAT_VERSION,
        "r_min": profile.grid.r_min,
        "r_max": profile.grid.r_max,
        "slope_a": profile.slope_a,
        "tol": tol,
        "n": int(profile.grid.nodes.size),
    }
    buf = io.BytesIO()
    np.save(buf, np.vstack([profile.grid.nodes, profile.rho, profile.drho]))
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(buf.getvalue())


def load_profile(path) -> VortexProfile:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        if header.get("format_version") != PROFILE_FORMAT_VERSION:
            raise ValueError("unsupported profile cache version")
        data = np.load(fh)
    nodes, rho, drho = data
    grid = RadialGrid(nodes)
    return VortexProfile(grid=grid, rho=rho, drho=drho,
                         slope_a=float(header["slope_a"]),
                         _spline=CubicSpline(nodes, rho),
                         _dspline=CubicSpline(nodes, drho))
