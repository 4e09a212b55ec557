"""Generalized eigenfunctions: matching, normalization, scattering data.

For each xi > 0 the bounded solution is glued from five trajectories:
two origin-regular solutions T1, T2 (seeded r*(1,0), r*(0,1) and
integrated outward) and the three Jost solutions (decaying, cos-type,
sin-type) built by the stable integral-equation construction.  The glue
lives in the null space of a 4x5 value/derivative matrix at r_match,
extracted by SVD; the singular-value gap is the numerical proxy for the
uniqueness of the bounded solution.

The matching radius respects kappa * r_match <= 8: past that the origin
pair's growing components make the bounded combination numerically
meaningless (their cancellation costs e^{kappa r_match} digits).

Normalization follows the far-field convention

    psi(xi, r) ~ (gamma1 sin(xi r) + gamma2 cos(xi r)) / sqrt(xi r) e(xi),

imposed through the matched coefficients: alpha3^2 + alpha4^2
= pi <lam>/a+ makes gamma1^2 + gamma2^2 = 1 exactly.  The overall sign of
a table is fixed by continuity in xi, anchored at the zero-frequency end
where the eigenfunction aligns with +(rho + J0(xi r) - 1) e(xi); a
standalone eigenfunction uses the tie-break gamma2 >= 0 (else gamma1 > 0).
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sps
from scipy.integrate import solve_ivp

from .grids import RadialGrid
from .jost import OuterSolutions, build_outer
from .odesys import (Representation, SolutionSample, SpectralPoint,
                     seed_origin, state_uv_rhs, wronskian)
from .profile import VortexProfile, resonance_vectors

TABLE_FORMAT_VERSION = 1
Y0_MATCH = 0.5          # paper-scale matching constant (4 y0 / xi)
KAPPA_RMATCH_CAP = 6.5  # origin-side cancellation budget
GAP_MIN = 1e3


class MatchingError(RuntimeError):
    pass


def smoothstep_cutoff(x):
    """chi(x): 1 for x <= 1, 0 for x >= 2, quintic smoothstep between."""
    x = np.asarray(x, dtype=float)
    s = np.clip(x - 1.0, 0.0, 1.0)
    return 1.0 - s ** 3 * (10.0 - 15.0 * s + 6.0 * s ** 2)


def match_radius(sp: SpectralPoint, r_max: float) -> float:
    return min(max(2.0, 4.0 * Y0_MATCH / max(sp.xi, 1e-12)),
               KAPPA_RMATCH_CAP / sp.kappa, r_max / 3.0)


@dataclass(frozen=True)
class MatchingCoefficients:
    """Null vector of the matching matrix in the conventions used to
    describe the two frequency regimes.

    beta1, beta2: origin-side weights (growing/I-type first, bounded
    J-type second); alpha2, alpha3, alpha4: infinity-side weights
    (decaying, cos-type, sin-type).  gap is the singular-value ratio
    rank check; resid the null-space residual.
    """
    beta1: float
    beta2: float
    alpha2: float
    alpha3: float
    alpha4: float
    gap: float
    resid: float
    raw: np.ndarray  # (c1, c2, a2, a3, a4) in the computational basis

    def paper_vector(self) -> np.ndarray:
        return np.array([self.alpha2, self.alpha3, self.alpha4,
                         self.beta1, self.beta2])


@dataclass
class OriginPair:
    """The two origin-regular trajectories as one 8-dim dense solution."""
    sp: SpectralPoint
    sol: object
    r_lo: float
    r_hi: float

    def states(self, r):
        r = np.asarray(r, dtype=float)
        y = self.sol(np.clip(r, self.r_lo, self.r_hi))
        return y[:4].T, y[4:].T  # (n,4) each


def build_origin_pair(sp: SpectralPoint, profile: VortexProfile,
                      r_hi: float, r0: float = 1e-3,
                      tol: float = 1e-13) -> OriginPair:
    s1 = seed_origin(sp, profile, 1, r0)
    s2 = seed_origin(sp, profile, 2, r0)
    rhs4 = state_uv_rhs(sp, profile)

    def rhs(r, y):
        return np.concatenate([rhs4(r, y[:4]), rhs4(r, y[4:])])

    sol = solve_ivp(rhs, (r0, r_hi), np.concatenate([s1.value, s2.value]),
                    method="DOP853", rtol=tol, atol=1e-290, dense_output=True)
    if not sol.success:
        raise RuntimeError(f"origin integration failed: {sol.message}")
    return OriginPair(sp=sp, sol=sol.sol, r_lo=r0, r_hi=r_hi)


def _matching_matrix(sp: SpectralPoint, origin: OriginPair,
                     outer: OuterSolutions, r_m: float) -> np.ndarray:
    t1, t2 = origin.states(np.array([r_m]))
    cols = [t1[0], t2[0],
            -outer.dec_at(r_m),
            -outer.osc_cos[outer.index_of(r_m)],
            -outer.osc_sin[outer.index_of(r_m)]]
    return np.stack(cols, axis=1)  # (4, 5)


def _null_vector(A: np.ndarray):
    """Smallest right singular vector of the column-normalized matrix,
    rescaled back; returns (x, gap, resid)."""
    scales = np.linalg.norm(A, axis=0)
    if np.any(scales == 0):
        raise MatchingError("degenerate matching column")
    An = A / scales
    u, s, vt = np.linalg.svd(An)
    x = vt[-1] / scales
    resid = float(np.linalg.norm(An @ vt[-1]))
    gap = s[-1] / max(resid, 1e-300)
    return x, float(gap), resid


def match(sp: SpectralPoint, origin: OriginPair, outer: OuterSolutions,
          r_m: float, profile: VortexProfile) -> MatchingCoefficients:
    """Null space of the 4x5 matching matrix at r_m, reported both in the
    computational basis and in the regime's reference normalization."""
    A = _matching_matrix(sp, origin, outer, r_m)
    x, gap, resid = _null_vector(A)
    if gap < GAP_MIN:
        raise MatchingError(
            f"singular-value gap {gap:.1e} below {GAP_MIN:.0e}: "
            "bad r_match or tolerance")
    c = x[:2]
    Mc = sp.m_matrix @ c
    if sp.high_regime:
        beta = (2.0 / sp.xi) * Mc
        beta1, beta2 = float(beta[0]), float(beta[1])
    else:
        a = profile.slope_a
        beta2 = float(Mc[1] / a)
        beta1 = float(Mc[0] + beta2 * a * sp.lam / (2.0 * sp.bracket))
    return MatchingCoefficients(beta1=beta1, beta2=beta2,
                                alpha2=float(x[2]), alpha3=float(x[3]),
                                alpha4=float(x[4]), gap=gap, resid=resid,
                                raw=x)


def gamma_from_alphas(sp: SpectralPoint, alpha3: float, alpha4: float):
    """Far-field phase pair from the oscillating coefficients.

    Low regime (J0/Y0 profiles, phase xi r - pi/4):
        gamma1 = C (a3 + a4)/sqrt(pi), gamma2 = C (a3 - a4)/sqrt(pi);
    high regime (J1/Y1, phase xi r - 3 pi/4):
        gamma1 = C (a3 - a4)/sqrt(pi), gamma2 = -C (a3 + a4)/sqrt(pi).
    """
    Cs = sp.c_factor
    rp = np.sqrt(np.pi)
    if sp.high_regime:
        return Cs * (alpha3 - alpha4) / rp, -Cs * (alpha3 + alpha4) / rp
    return Cs * (alpha3 + alpha4) / rp, Cs * (alpha3 - alpha4) / rp


@dataclass
class Eigenfunction:
    """Normalized bounded solution at one xi > 0, sampled on the grid."""
    sp: SpectralPoint
    grid: RadialGrid
    samples: np.ndarray            # (nr, 2)
    coeffs: MatchingCoefficients   # in the normalized scaling
    gamma: tuple
    r_match: float
    match_consistency: float       # two-radius null-vector deviation
    glue_jump: float               # C1 relative mismatch at r_match
    farfield_resid: float          # envelope-relative sinusoid misfit (nan if no window)

    @property
    def xi(self) -> float:
        return self.sp.xi


def eigenfunction(sp: SpectralPoint, profile: VortexProfile,
                  grid: RadialGrid, sign_hint: np.ndarray | None = None) -> Eigenfunction:
    """Construct, normalize and sample the bounded solution at sp.xi > 0."""
    if sp.xi <= 0:
        raise ValueError("xi = 0 is excluded; use the stored zero-frequency limit")
    r_max = grid.r_max
    r_m = match_radius(sp, r_max)
    r_m2 = min(2.0 * r_m, 0.75 * r_max)
    inner_nodes = grid.nodes[grid.nodes <= r_m]
    outer_mask = grid.nodes > r_m
    outer_extra = np.concatenate([[r_m, r_m2], grid.nodes[outer_mask]])
    outer = build_outer(sp, profile, r_lo=0.7 * r_m, r_hi=r_max,
                        extra_radii=outer_extra)
    origin = build_origin_pair(sp, profile, r_hi=max(r_m2 * 1.01, r_m + 1.0))

    co = match(sp, origin, outer, r_m, profile)
    co2 = match(sp, origin, outer, r_m2, profile)
    # two-radius invariance, measured in the column-weighted coordinates of
    # the first matching matrix: a coefficient on an exponentially small
    # column (the decaying one at high xi) is determined in absolute, not
    # relative, terms and is weighted accordingly.
    w = np.linalg.norm(_matching_matrix(sp, origin, outer, r_m), axis=0)
    v1 = co.raw * w
    v2 = co2.raw * w
    v1 = v1 / np.linalg.norm(v1)
    v2 = v2 / np.linalg.norm(v2)
    consistency = float(min(np.linalg.norm(v1 - v2), np.linalg.norm(v1 + v2)))

    # normalization: alpha3^2 + alpha4^2 = pi/(2 C^2) = pi <lam>/a+
    a34 = np.hypot(co.alpha3, co.alpha4)
    if a34 == 0:
        raise MatchingError("vanishing oscillatory part; boundedness violated")
    scale = np.sqrt(np.pi * sp.bracket / sp.a_plus) / a34
    x = co.raw * scale

    # sign: tie-break gamma2 >= 0 (else gamma1 > 0) unless a hint is given
    g1, g2 = gamma_from_alphas(sp, x[3], x[4])
    flip = 1.0
    if abs(g2) > 1e-6:
        flip = np.sign(g2)
    elif g1 < 0:
        flip = -1.0
    x = x * flip

    t1, t2 = origin.states(inner_nodes)
    inner_vals = x[0] * t1 + x[1] * t2  # (n, 4)
    out_idx = np.array([outer.index_of(r) for r in grid.nodes[outer_mask]])
    kap = sp.kappa
    dec_vals = outer.dec_scaled[out_idx] * np.exp(-kap * outer.nodes[out_idx])[:, None]
    dec_vals[:, 1] -= kap * dec_vals[:, 0]
    dec_vals[:, 3] -= kap * dec_vals[:, 2]
    outer_vals = x[2] * dec_vals + x[3] * outer.osc_cos[out_idx] + x[4] * outer.osc_sin[out_idx]

    vals = np.empty((grid.nodes.size, 2))
    vals[~outer_mask] = inner_vals[:, (0, 2)]
    vals[outer_mask] = outer_vals[:, (0, 2)]

    # C1 glue check at r_match
    ti = x[0] * origin.states(np.array([r_m]))[0][0] + x[1] * origin.states(np.array([r_m]))[1][0]
    to = (x[2] * outer.dec_at(r_m) + x[3] * outer.osc_cos[outer.index_of(r_m)]
          + x[4] * outer.osc_sin[outer.index_of(r_m)])
    glue = float(np.max(np.abs(ti - to)) / max(np.max(np.abs(to)), 1e-300))

    g1, g2 = gamma_from_alphas(sp, x[3], x[4])
    co_n = MatchingCoefficients(
        beta1=co.beta1 * scale * flip, beta2=co.beta2 * scale * flip,
        alpha2=float(x[2]), alpha3=float(x[3]), alpha4=float(x[4]),
        gap=co.gap, resid=co.resid, raw=x)

    ff = _farfield_residual(sp, grid, vals, (g1, g2))
    eig = Eigenfunction(sp=sp, grid=grid, samples=vals, coeffs=co_n,
                        gamma=(float(g1), float(g2)), r_match=r_m,
                        match_consistency=consistency, glue_jump=glue,
                        farfield_resid=ff)
    if sign_hint is not None:
        if float(np.sum(sign_hint * vals)) < 0:
            return _flipped(eig)
    return eig


def _flipped(eig: Eigenfunction) -> Eigenfunction:
    c = eig.coeffs
    co = MatchingCoefficients(beta1=-c.beta1, beta2=-c.beta2,
                              alpha2=-c.alpha2, alpha3=-c.alpha3,
                              alpha4=-c.alpha4, gap=c.gap, resid=c.resid,
                              raw=-c.raw)
    return Eigenfunction(sp=eig.sp, grid=eig.grid, samples=-eig.samples,
                         coeffs=co, gamma=(-eig.gamma[0], -eig.gamma[1]),
                         r_match=eig.r_match,
                         match_consistency=eig.match_consistency,
                         glue_jump=eig.glue_jump,
                         farfield_resid=eig.farfield_resid)


def _farfield_residual(sp: SpectralPoint, grid: RadialGrid,
                       vals: np.ndarray, gamma) -> float:
    """Envelope-relative misfit of the far field against the normalized
    sinusoid; nan when the grid holds no window with xi r >= 10."""
    r = grid.nodes
    win = sp.xi * r >= 10.0
    if np.count_nonzero(win) < 24:
        return float("nan")
    rr = r[win]
    proj = vals[win] @ sp.e_vec
    model = (gamma[0] * np.sin(sp.xi * rr) + gamma[1] * np.cos(sp.xi * rr)) / np.sqrt(sp.xi * rr)
    env = 1.0 / np.sqrt(sp.xi * rr)
    return float(np.max(np.abs(proj - model) / env))


# ---------------------------------------------------------------------------
# scattering decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenDecomposition:
    singular_part: np.ndarray
    regular_part: np.ndarray
    regime: str                    # "flat_low" | "sharp_high"
    template_coeffs: dict
    envelope_const: float          # fitted C in C/(xi <r> <xi r>^{1/2}) (high)


def _low_decomposition(eig: Eigenfunction, profile: VortexProfile):
    sp_, grid = eig.sp, eig.grid
    xi = sp_.xi
    r = grid.nodes
    # (b, c) multiply cos/sin(xi r - pi/4); the matched alphas sit in the
    # J0/Y0 basis below the regime switch and in the J1/Y1 basis above it
    # (profile phases -pi/4 and -3pi/4 respectively)
    fac = np.sqrt(2.0 / np.pi) * sp_.c_factor
    if sp_.high_regime:
        b_flat = -fac * eig.coeffs.alpha4
        c_flat = fac * eig.coeffs.alpha3
    else:
        b_flat = fac * eig.coeffs.alpha3
        c_flat = fac * eig.coeffs.alpha4
    chi = smoothstep_cutoff(xi * r)
    base = np.sqrt(np.pi / 2.0) * b_flat * ((profile.rho - 1.0) * chi + sps.j0(xi * r))
    osc = c_flat * np.sin(xi * r - np.pi / 4.0) / np.sqrt(xi * r) * (1.0 - chi)
    sing = (base + osc)[:, None] * sp_.e_vec[None, :]
    reg = eig.samples - sing
    return sing, reg, {"b_flat": float(b_flat), "c_flat": float(c_flat)}


def _high_decomposition(eig: Eigenfunction, profile: VortexProfile):
    sp_, grid = eig.sp, eig.grid
    xi = sp_.xi
    r = grid.nodes
    b_sharp, c_sharp = eig.gamma[1], eig.gamma[0]
    chi = smoothstep_cutoff(r)
    osc = (b_sharp * np.cos(xi * r) + c_sharp * np.sin(xi * r)) / np.sqrt(xi * r) * (1.0 - chi)
    proj = eig.samples @ sp_.e_vec
    # sqrt(pi/2) J1 matches the far-field 1/sqrt(xi r) sinusoid amplitude
    # through the cutoff overlap, so a_sharp -> 1 in the high limit
    basis = np.sqrt(np.pi / 2.0) * sps.j1(xi * r) * chi
    m = chi > 0
    denom = float(np.sum(basis[m] ** 2))
    a_sharp = float(np.sum(basis[m] * (proj[m] - osc[m])) / denom) if denom > 0 else float("nan")
    sing = (a_sharp * basis + osc)[:, None] * sp_.e_vec[None, :]
    reg = eig.samples - sing
    return sing, reg, {"a_sharp": a_sharp, "b_sharp": float(b_sharp),
                       "c_sharp": float(c_sharp)}


def scattering_coeffs(eig: Eigenfunction, profile: VortexProfile) -> EigenDecomposition:
    """Split psi into the regime template and the residual.

    |xi| <= 0.5 uses the low template, |xi| >= 2 the high one; in the gap
    both are valid and the smaller residual wins.  Coefficients are
    reported for the representative aligned with the reference limits
    (b_flat -> +1 at low xi, c_sharp -> +1/sqrt2 at high xi).
    """
    xi = abs(eig.sp.xi)
    cands = []
    if xi <= 2.0:
        cands.append(("flat_low", _low_decomposition(eig, profile)))
    if xi >= 0.5:
        cands.append(("sharp_high", _high_decomposition(eig, profile)))
    best = None
    for regime, (sing, reg, coef) in cands:
        resid = float(np.linalg.norm(reg))
        if best is None or resid < best[0]:
            best = (resid, regime, sing, reg, coef)
    _, regime, sing, reg, coef = best
    flip = 1.0
    if regime == "flat_low" and coef["b_flat"] < 0:
        flip = -1.0
    if regime == "sharp_high" and coef["c_sharp"] < 0:
        flip = -1.0
    if flip < 0:
        sing, reg = -sing, -reg
        coef = {k: -v for k, v in coef.items()}
    env = float("nan")
    if regime == "sharp_high":
        r = eig.grid.nodes
        win = xi * r >= 10.0
        if np.any(win):
            shape = 1.0 / (xi * np.hypot(1.0, r[win]) * np.sqrt(np.hypot(1.0, xi * r[win])))
            amp = np.linalg.norm(reg[win], axis=1)
            env = float(np.sum(shape * amp) / np.sum(shape ** 2))
    return EigenDecomposition(singular_part=sing, regular_part=reg,
                              regime=regime, template_coeffs=coef,
                              envelope_const=env)


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class XiGridSpec:
    """Positive-side frequency nodes; the negative side is generated by
    symmetry.

    Spacing grows geometrically from xi_min (resolving the logarithmic
    low-frequency behaviour) but is capped at dxi_cap: the inverse
    transform integrates e^{i xi r}-type oscillations out to r_max, which
    demands dxi * r_max bounded everywhere on the grid.
    """
    xi_min: float = 1e-3
    xi_max: float = 8.0
    dxi_cap: float = 0.009
    growth: float = 0.30

    def positive_nodes(self) -> np.ndarray:
        nodes = [self.xi_min]
        x = self.xi_min
        while x < self.xi_max:
            x += min(self.growth * x, self.dxi_cap)
            nodes.append(x)
        nodes[-1] = self.xi_max
        return np.array(nodes)

    @classmethod
    def for_grid(cls, r_max: float, xi_max: float, xi_min: float = 1e-3,
                 phase_budget: float = 0.35) -> "XiGridSpec":
        return cls(xi_min=xi_min, xi_max=xi_max,
                   dxi_cap=phase_budget / r_max)

    def to_dict(self) -> dict:
        return {"xi_min": self.xi_min, "xi_max": self.xi_max,
                "dxi_cap": self.dxi_cap, "growth": self.growth}


@dataclass
class EigenTable:
    """Eigenfunctions at positive xi nodes; negative side by symmetry
    psi(-xi, r) = -sigma1 psi(xi, r).  psi0 stores the xi -> 0 limit
    sqrt(pi/4) Xi0 together with its xi-derivative sqrt(pi/4) Xi1."""
    grid: RadialGrid
    xi: np.ndarray                # (nxi,) positive, ascending
    psi: np.ndarray               # (nxi, nr, 2)
    gamma: np.ndarray             # (nxi, 2)
    alphas: np.ndarray            # (nxi, 5): alpha2..4, beta1, beta2
    gaps: np.ndarray              # (nxi,)
    consistency: np.ndarray       # (nxi,)
    glue: np.ndarray              # (nxi,)
    farfield: np.ndarray          # (nxi,)
    psi0: np.ndarray              # (nr, 2)
    dpsi0: np.ndarray             # (nr, 2)
    profile_hash: str
    spec: dict

    @property
    def nxi(self) -> int:
        return int(self.xi.size)

    def lam(self) -> np.ndarray:
        return self.xi * np.sqrt(self.xi ** 2 + 2.0)

    def dlam(self) -> np.ndarray:
        return 2.0 * (self.xi ** 2 + 1.0) / np.sqrt(self.xi ** 2 + 2.0)

    def psi_neg(self) -> np.ndarray:
        """psi at the mirrored nodes -xi, via -sigma1."""
        return -self.psi[:, :, ::-1]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.xi.tobytes())
        h.update(self.psi.tobytes())
        return h.hexdigest()[:16]


def build_table(profile: VortexProfile, xi_spec: XiGridSpec,
                grid: RadialGrid | None = None, progress=None) -> EigenTable:
    grid = grid or profile.grid
    xis = xi_spec.positive_nodes()
    nr = grid.nodes.size
    psi = np.empty((xis.size, nr, 2))
    gamma = np.empty((xis.size, 2))
    alphas = np.empty((xis.size, 5))
    gaps = np.empty(xis.size)
    consistency = np.empty(xis.size)
    glue = np.empty(xis.size)
    farfield = np.empty(xis.size)
    pair = resonance_vectors(profile)
    psi0 = np.sqrt(np.pi / 4.0) * pair.xi0
    # d/dxi of the family at 0: sqrt(pi/2) [rho e'(0) + (1/sqrt2) r rho' e(0)^perp]
    # = sqrt(pi/8) (r rho' + rho)(1,1); the flat closed form fixes the
    # constant (sqrt(pi/8), not sqrt(pi/4))
    dpsi0 = np.sqrt(np.pi / 8.0) * pair.xi1
    failures = []
    hint = psi0.copy()  # continuity anchor: the zero-frequency limit
    for j, xi in enumerate(xis):
        try:
            eig = eigenfunction(SpectralPoint.from_xi(float(xi)), profile,
                                grid, sign_hint=hint)
        except Exception as exc:  # aggregate per-node failures
            failures.append((j, float(xi), repr(exc)))
            if len(failures) > 5:
                raise RuntimeError(f"table build failing: {failures}") from exc
            psi[j] = np.nan
            continue
        psi[j] = eig.samples
        gamma[j] = eig.gamma
        c = eig.coeffs
        alphas[j] = (c.alpha2, c.alpha3, c.alpha4, c.beta1, c.beta2)
        gaps[j] = c.gap
        consistency[j] = eig.match_consistency
        glue[j] = eig.glue_jump
        farfield[j] = eig.farfield_resid
        hint = eig.samples
        if progress is not None:
            progress(j, xis.size)
    if failures:
        raise RuntimeError(f"table build failed at nodes: {failures}")
    return EigenTable(grid=grid, xi=xis, psi=psi, gamma=gamma, alphas=alphas,
                      gaps=gaps, consistency=consistency, glue=glue,
                      farfield=farfield, psi0=psi0, dpsi0=dpsi0,
                      profile_hash=profile.content_hash(),
                      spec=xi_spec.to_dict())


# ---------------------------------------------------------------------------
# cache (deterministic byte layout: JSON header line + raw npy blocks)
# ---------------------------------------------------------------------------

_TABLE_ARRAYS = ("xi", "psi", "gamma", "alphas", "gaps", "consistency",
                 "glue", "farfield", "psi0", "dpsi0")


def save_table(path, table: EigenTable) -> None:
    header = {
        "format_version": TABLE_FORMAT_VERSION,
        "profile_hash": table.profile_hash,
        "spec": table.spec,
        "grid": table.grid.spec(),
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        buf = io.BytesIO()
        np.save(buf, table.grid.nodes)
        for name in _TABLE_ARRAYS:
            np.save(buf, getattr(table, name))
        fh.write(buf.getvalue())


def load_table(path) -> EigenTable:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        if header.get("format_version") != TABLE_FORMAT_VERSION:
            raise ValueError("unsupported table cache version")
        nodes = np.load(fh)
        arrays = {name: np.load(fh) for name in _TABLE_ARRAYS}
    grid = RadialGrid(nodes)
    return EigenTable(grid=grid, profile_hash=header["profile_hash"],
                      spec=header["spec"], **arrays)


def table_cache_key(profile: VortexProfile, xi_spec: XiGridSpec,
                    grid: RadialGrid, version: str) -> str:
    h = hashlib.sha256()
    h.update(profile.content_hash().encode())
    h.update(json.dumps(xi_spec.to_dict(), sort_keys=True).encode())
    h.update(json.dumps(grid.spec(), sort_keys=True).encode())
    h.update(version.encode())
    return h.hexdigest()[:24]
