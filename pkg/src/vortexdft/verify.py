"""The acceptance suite: every criterion as a machine-checkable item.

run_verify builds the artifacts a configuration describes (profile,
eigenfunction tables, flat oracle) and evaluates the full criteria list,
returning a JSON-serializable report with one pass/fail entry per check.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import linregress

from . import dft, evolve, flat
from .config import default_config, transform_grid_params
from .eigen import (XiGridSpec, build_table, eigenfunction, scattering_coeffs)
from .grids import RadialGrid, fornberg_weights
from .odesys import SpectralPoint, wronskian
from .profile import (VortexProfile, kernel_solutions, resonance_vectors,
                      solve_profile)

SQRT2 = np.sqrt(2.0)


@dataclass
class CheckResult:
    criterion: str
    name: str
    passed: bool
    value: float
    threshold: float
    comparator: str = "<="

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] {self.criterion:<12} {self.name:<46} "
                f"value={self.value:.3e} {self.comparator} {self.threshold:.3e}")


class Reporter:
    def __init__(self, verbose: bool = True):
        self.rows: list[CheckResult] = []
        self.verbose = verbose

    def add(self, criterion, name, value, threshold, comparator="<="):
        value = float(value)
        if comparator == "<=":
            ok = value <= threshold
        elif comparator == ">=":
            ok = value >= threshold
        elif comparator == "in":
            lo, hi = threshold
            ok = lo <= value <= hi
            row = CheckResult(criterion, name, bool(ok), value, float(lo), f"in[{lo},{hi}]")
            row.threshold = float(hi)
            self.rows.append(row)
            if self.verbose:
                print(row.line(), flush=True)
            return ok
        else:
            raise ValueError(comparator)
        row = CheckResult(criterion, name, bool(ok), value, float(threshold), comparator)
        self.rows.append(row)
        if self.verbose:
            print(row.line(), flush=True)
        return ok

    def report(self) -> dict:
        return {
            "passed": all(r.passed for r in self.rows),
            "n_checks": len(self.rows),
            "n_failed": sum(not r.passed for r in self.rows),
            "checks": [asdict(r) for r in self.rows],
        }


def profile_on_grid(profile: VortexProfile, grid: RadialGrid) -> VortexProfile:
    """Resample an already-solved profile onto a sub-grid."""
    from scipy.interpolate import CubicSpline
    if grid.r_max > profile.grid.r_max + 1e-9:
        raise ValueError("target grid exceeds the solved range")
    rho = profile.rho_at(grid.nodes)
    drho = profile.drho_at(grid.nodes)
    return VortexProfile(grid=grid, rho=rho, drho=drho,
                         slope_a=profile.slope_a,
                         _spline=CubicSpline(grid.nodes, rho),
                         _dspline=CubicSpline(grid.nodes, drho),
                         _dense=profile._dense)


def fd_residual_profile(profile: VortexProfile, lo: float, hi: float) -> float:
    """Max |rho'' + rho'/r - rho/r^2 + (1-rho^2) rho| on [lo, hi] by
    7-point stencils on a fine uniform grid."""
    r = np.linspace(lo, hi, 4001)
    rho = profile.rho_at(r)
    h = r[1] - r[0]
    w1 = fornberg_weights(r[:7], r[3], 1)
    w2 = fornberg_weights(r[:7], r[3], 2)
    from numpy.lib.stride_tricks import sliding_window_view
    win = sliding_window_view(rho, 7)
    d1 = win @ w1
    d2 = win @ w2
    mid = slice(3, -3)
    res = d2 + d1 / r[mid] - rho[mid] / r[mid] ** 2 + (1 - rho[mid] ** 2) * rho[mid]
    return float(np.max(np.abs(res)))


# ---------------------------------------------------------------------------
# test fields
# ---------------------------------------------------------------------------

def vortex_battery(grid: RadialGrid):
    """Five smooth decaying first-harmonic fields (u ~ r near 0)."""
    r = grid.nodes
    g1 = r * np.exp(-r ** 2 / 4.0)
    g2 = r * np.exp(-r ** 2 / 6.0)
    g3 = r ** 3 * np.exp(-r ** 2 / 3.0) / 3.0
    g4 = r * np.exp(-((r - 2.0) / 2.0) ** 2)
    fields = [
        np.stack([g1, -0.4 * g2], axis=1),
        np.stack([g2, g2], axis=1),          # sigma1-even
        np.stack([g1, -g1], axis=1),         # sigma1-odd
        np.stack([g3, 0.2 * g1], axis=1),
        np.stack([0.5 * g4, g3 - 0.3 * g4], axis=1),
    ]
    return [dft.RadialField(grid, f.astype(complex)) for f in fields]


def flat_battery(grid: RadialGrid):
    """Smooth decaying radial (zeroth-harmonic) fields: even in r."""
    r = grid.nodes
    g1 = np.exp(-r ** 2 / 4.0)
    g2 = np.exp(-r ** 2 / 6.0)
    g3 = r ** 2 * np.exp(-r ** 2 / 3.0)
    fields = [
        np.stack([g1, -0.4 * g2], axis=1),
        np.stack([g2, g2], axis=1),
        np.stack([g1, -g1], axis=1),
        np.stack([g3, 0.2 * g1], axis=1),
        np.stack([g1 - 0.5 * g3, g2 * 0.7], axis=1),
    ]
    return [f.astype(complex) for f in fields]


def spectral_bump(xs: np.ndarray, center: float, width: float) -> np.ndarray:
    return (np.exp(-((np.abs(xs) - center) / width) ** 2)).astype(complex)


# ---------------------------------------------------------------------------
# criterion groups
# ---------------------------------------------------------------------------

def check_profile(rep, profile, grid60):
    res = fd_residual_profile(profile, 0.5, min(50.0, profile.grid.r_max - 5))
    rep.add("1-profile", "ODE residual (interior)", res, 1e-8)
    rep.add("1-profile", "|1 - rho(10) - 0.005|",
            abs(1.0 - profile.rho_at(10.0) - 0.005), 5e-4)
    prof60 = profile_on_grid(profile, grid60)
    ks = kernel_solutions(prof60)
    # derivative identity (L0 - 2 rho^2)(r rho') = 2 (rho^2-1) rho,
    # differenced with radius-proportional stencils (regular singular point)
    rep.add("1-profile", "(L0-2rho^2)(r rho') identity",
            prmidv_residual(prof60), 1e-6)
    return ks


def prmidv_residual(profile) -> float:
    rr = np.geomspace(2 * profile.grid.r_min, profile.grid.r_max / 2, 320)
    worst = 0.0
    s_fn = lambda x: x * profile.drho_at(x)
    for r0 in rr:
        h = r0 / 30.0
        x = r0 + h * np.arange(-3, 4)
        w1 = fornberg_weights(x, r0, 1)
        w2 = fornberg_weights(x, r0, 2)
        s = s_fn(x)
        rho = profile.rho_at(r0)
        lhs = w2 @ s + (w1 @ s) / r0 - s_fn(r0) / r0 ** 2 \
            + (1 - 3 * rho ** 2) * s_fn(r0)
        rhs = 2 * (rho ** 2 - 1) * rho
        worst = max(worst, abs(lhs - rhs))
    return worst


def check_resonance(rep, profile, grid):
    prof = profile_on_grid(profile, grid)
    pair = resonance_vectors(prof)
    f0 = dft.RadialField(grid, pair.xi0.astype(complex))
    f1 = dft.RadialField(grid, pair.xi1.astype(complex))
    n0 = grid.norm2(pair.xi0)
    h0 = dft.apply_H(f0, prof)
    h1 = dft.apply_H(f1, prof)
    rep.add("2-resonance", "|H Xi0| / |Xi0|", grid.norm2(h0.values) / n0, 1e-6)
    rep.add("2-resonance", "|H Xi1 - 2 Xi0| / |Xi0|",
            grid.norm2(h1.values - 2 * pair.xi0) / n0, 1e-6)


def check_table_structure(rep, table, label):
    rep.add("3-eigen", f"{label}: min matching gap", np.min(table.gaps),
            1e3, ">=")
    gnorm = np.abs(np.sum(table.gamma ** 2, axis=1) - 1.0)
    rep.add("3-eigen", f"{label}: max |gamma1^2+gamma2^2-1|",
            np.max(gnorm), 1e-10)
    rep.add("3-eigen", f"{label}: max two-radius deviation",
            np.max(table.consistency), 1e-4)


def check_wronskian_constancy(rep, profile, grid):
    """Constancy of W along r for the oscillating Jost pair and for the
    (origin, oscillating) cross pairs, relative to the trajectory scale."""
    from .eigen import build_origin_pair, match_radius
    from .jost import build_outer
    from .odesys import SolutionSample
    worst = 0.0
    for xi in (0.05, 0.7, 3.0):
        sp = SpectralPoint.from_xi(xi)
        r_m = match_radius(sp, grid.r_max)
        radii = np.linspace(max(1.0, r_m), min(grid.r_max * 0.8, r_m + 20), 9)
        outer = build_outer(sp, profile, r_lo=0.7 * r_m, r_hi=grid.r_max,
                            extra_radii=radii)
        origin = build_origin_pair(sp, profile, r_hi=radii[-1] * 1.01)
        t1, t2 = origin.states(radii)
        ws_pairs = {"osc": [], "cross": []}
        for k, r in enumerate(radii):
            oc = outer.state("osc_cos", r)
            os_ = outer.state("osc_sin", r)
            ws_pairs["osc"].append(wronskian(oc, os_))
            a = SolutionSample(r=r, value=t1[k] / max(np.max(np.abs(t1[k])), 1e-300))
            ws_pairs["cross"].append(wronskian(a, oc))
        for name, ws in ws_pairs.items():
            ws = np.array(ws)
            spread = (ws.max() - ws.min()) / max(np.max(np.abs(ws)), 1e-300)
            worst = max(worst, abs(spread))
    rep.add("3-eigen", "Wronskian constancy (pairs, relative)", worst, 1e-6)


def check_scattering(rep, profile, table, sweep_eigs):
    xi = table.xi
    # low-frequency law on table nodes: regime-correct (b,c) extraction
    fac = np.sqrt(2.0 / np.pi)
    mask = (xi >= 1e-3) & (xi <= 0.3)
    bb = np.empty(np.count_nonzero(mask))
    cc = np.empty_like(bb)
    for k, j in enumerate(np.nonzero(mask)[0]):
        sp = SpectralPoint.from_xi(float(xi[j]))
        cf = fac * sp.c_factor
        a2, a3, a4, b1, b2 = table.alphas[j]
        if sp.high_regime:
            b, c = -cf * a4, cf * a3
        else:
            b, c = cf * a3, cf * a4
        if b < 0:
            b, c = -b, -c
        bb[k], cc[k] = b, c
    dev = np.maximum(np.abs(bb - 1.0), np.abs(cc))
    bound = 50.0 * xi[mask] ** 2 * np.log(xi[mask]) ** 2
    rep.add("4-scatter", "max (|b_flat-1|,|c_flat|) / 50 xi^2 ln^2 xi",
            np.max(dev / bound), 1.0)
    # high-frequency drift on the sparse sweep
    worst = 0.0
    for eig, dec in sweep_eigs:
        tc = dec.template_coeffs
        lhs = abs(tc["b_sharp"] + 1 / SQRT2) + abs(tc["c_sharp"] - 1 / SQRT2)
        worst = max(worst, lhs * eig.sp.xi / 5.0)
    rep.add("4-scatter", "max (|b#+1/sqrt2|+|c#-1/sqrt2|) xi / 5",
            worst, 1.0)


def check_transforms(rep, profile, table, quad_tol, label="5-transform",
                     tol=1e-3):
    grid = table.grid
    prof = profile_on_grid(profile, grid)
    worst_rt = worst_pl = worst_dg = 0.0
    for f in vortex_battery(grid):
        worst_rt = max(worst_rt, dft.roundtrip_defect(f, table))
        worst_pl = max(worst_pl, dft.plancherel_defect(f, f, table))
        worst_dg = max(worst_dg, dft.diag_defect(f, table, prof))
    xs = dft.signed_xi(table)
    worst_sp = 0.0
    for c, wdt in ((1.2, 0.5), (2.0, 0.7)):
        dens = dft.SpectralDensity(xi=xs, values=spectral_bump(xs, c, wdt))
        worst_sp = max(worst_sp, dft.spectral_roundtrip_defect(dens, table))
    rep.add(label, "inverse(forward) defect (battery max)", worst_rt, tol)
    rep.add(label, "forward(inverse) defect (bumps max)", worst_sp, tol)
    rep.add(label, "Plancherel defect (battery max)", worst_pl, tol)
    rep.add(label, "diagonalization defect (battery max)", worst_dg, tol)
    return worst_rt, worst_sp, worst_pl, worst_dg


def check_zero_frequency(rep, table, tol=1e-3):
    grid = table.grid
    field = vortex_battery(grid)[0]
    zf = dft.forward(field, table)
    xi = table.xi
    ze = 0.5 * (zf.pos() + zf.neg_rev())
    zo = 0.5 * (zf.pos() - zf.neg_rev())
    mask = (xi >= 0.01) & (xi <= 0.2)
    x = xi[mask]
    basis = np.stack([np.ones_like(x), x ** 2, x ** 2 * np.log(x) ** 2], axis=1)
    coef_e, *_ = np.linalg.lstsq(basis, ze[mask].real, rcond=None)
    coef_o, *_ = np.linalg.lstsq(basis, (zo[mask] / x).real, rcond=None)
    v0 = dft.zero_frequency_value(field, table).real
    d0 = dft.zero_frequency_slope(field, table).real
    rep.add("6-zerofreq", "F phi(0) vs sqrt(pi/4)<phi, s3 Xi0>",
            abs(coef_e[0] - v0) / abs(v0), tol)
    rep.add("6-zerofreq", "F phi'(0) vs sqrt(pi/4)<phi, s3 Xi1>",
            abs(coef_o[0] - d0) / abs(d0), tol)


def _band_limited_data(table, band, even_zero=False):
    xs = dft.signed_xi(table)
    if even_zero:
        prof_amp = (xs / band) ** 2 * np.exp(-(xs / band) ** 2)
    else:
        prof_amp = np.exp(-(xs / band) ** 2)
    dens = dft.SpectralDensity(xi=xs, values=prof_amp.astype(complex))
    return dft.inverse(dens, table)


def check_decay(rep, profile, table, times, band, crit="7-decay",
                rep8="8-growth"):
    grid = table.grid
    prof = profile_on_grid(profile, grid)
    data_a = _band_limited_data(table, band)
    data_a = dft.RadialField(grid, data_a.values.real.astype(complex))
    pair_a, _ = evolve.orthogonality(data_a, prof)
    data_b0 = _band_limited_data(table, band, even_zero=True)
    data_b = evolve.project_out_pairing(
        dft.RadialField(grid, data_b0.values.real.astype(complex)), prof)
    pair_b, _ = evolve.orthogonality(data_b, prof)

    sup_a, sup_b, l2_a, l2_b, argmax_a = [], [], [], [], []
    for t in times:
        ra = evolve.propagate(data_a, t, table)
        rb = evolve.propagate(data_b, t, table)
        sup_a.append(ra.sup_norm)
        sup_b.append(rb.sup_norm)
        l2_a.append(ra.l2_norm)
        l2_b.append(rb.l2_norm)
        argmax_a.append(ra.argmax_r)
    exp_a, _ = evolve.fit_decay(times, sup_a)
    exp_b, _ = evolve.fit_decay(times, sup_b)
    rep.add(crit, "sup-norm exponent (generic)", exp_a, (-0.75, -0.58), "in")
    rep.add(crit, "sup-norm exponent (projected)", exp_b, (-1.1, -0.85), "in")
    rep.add(crit, "argmax_r / t at t=100", argmax_a[-1] / times[-1],
            (1.2, 1.7), "in")
    rep.add(rep8, "L2 ratio norm(100)/norm(10), pairing != 0",
            l2_a[-1] / l2_a[0], (1.05, 2.5), "in")
    rep.add(rep8, "L2 ratio norm(100)/norm(10), pairing = 0",
            l2_b[-1] / l2_b[0], 1.2)
    return {"pair_a": abs(pair_a), "pair_b": abs(pair_b),
            "exp_a": exp_a, "exp_b": exp_b}


def check_flat(rep, cfg):
    sec = cfg["flat"]
    grid = RadialGrid.build(**transform_grid_params(sec))
    spec = XiGridSpec.for_grid(r_max=sec["r_max"], xi_max=sec["xi_max"],
                               xi_min=sec["xi_min"],
                               phase_budget=sec["phase_budget"])
    ft = flat.FlatTransform(grid, spec)
    tol = 1e-6
    worst_rt = worst_pl = worst_dg = 0.0
    for vals in flat_battery(grid):
        worst_rt = max(worst_rt, ft.roundtrip_defect(vals))
        worst_pl = max(worst_pl, ft.plancherel_defect(vals, vals))
        worst_dg = max(worst_dg, ft.diag_defect(vals))
    xs = ft.signed_xi()
    worst_sp = 0.0
    for c, wdt in ((1.2, 0.5), (2.0, 0.7)):
        worst_sp = max(worst_sp, ft.spectral_roundtrip_defect(
            spectral_bump(xs, c, wdt)))
    rep.add("9-flat", "flat inverse(forward) defect", worst_rt, tol)
    rep.add("9-flat", "flat forward(inverse) defect", worst_sp, tol)
    rep.add("9-flat", "flat Plancherel defect", worst_pl, tol)
    rep.add("9-flat", "flat diagonalization defect", worst_dg, tol)
    return ft


def check_flat_decay(rep, cfg):
    sec = cfg["evolve"]
    grid = RadialGrid.build(r_min=1e-4, r_max=sec["r_max"],
                            n_geo=sec["n_geo"],
                            n_uni=int((sec["r_max"] - 2.0) / sec["h_r"]))
    spec = XiGridSpec.for_grid(r_max=sec["r_max"], xi_max=sec["xi_max"],
                               xi_min=sec["xi_min"],
                               phase_budget=sec["phase_budget"])
    ft = flat.FlatTransform(grid, spec)
    xs = ft.signed_xi()
    band = sec["band"]
    times = np.asarray(sec["times"])
    za = np.exp(-(xs / band) ** 2).astype(complex)
    zb = ((xs / band) ** 2 * np.exp(-(xs / band) ** 2)).astype(complex)
    out = {}
    for name, z in (("generic", za), ("alpha0hat-zero", zb)):
        data = ft.inverse(z).real
        sup, l2 = [], []
        for t in times:
            ev = ft.propagate(data.astype(complex), t)
            amp = np.linalg.norm(ev, axis=1)
            sup.append(float(np.max(amp)))
            l2.append(float(grid.norm2(ev)))
        slope, _ = evolve.fit_decay(times, sup)
        out[name] = (slope, l2[-1] / l2[0])
    rep.add("9-flat", "flat sup exponent (generic)", out["generic"][0],
            (-0.75, -0.58), "in")
    rep.add("9-flat", "flat sup exponent (hat alpha0(0)=0)",
            out["alpha0hat-zero"][0], (-1.1, -0.85), "in")
    rep.add("9-flat", "flat L2 ratio (generic)", out["generic"][1],
            (1.05, 2.5), "in")
    rep.add("9-flat", "flat L2 ratio (hat alpha0(0)=0)",
            out["alpha0hat-zero"][1], 1.2)


def check_cross(rep, sweep_eigs):
    devs = {}
    for eig, dec in sweep_eigs:
        if abs(eig.sp.xi - 10.0) < 1e-9 or abs(eig.sp.xi - 20.0) < 1e-9:
            r = eig.grid.nodes
            win = eig.sp.xi * r >= 10.0
            rr = r[win]
            vals = eig.samples[win]
            best = np.inf
            for delta in np.linspace(0, 2 * np.pi, 96, endpoint=False):
                model = (np.cos(eig.sp.xi * rr - np.pi / 4 + delta)
                         / np.sqrt(eig.sp.xi * rr))[:, None] * eig.sp.e_vec
                for sgn in (1.0, -1.0):
                    d = np.sqrt(np.sum((vals - sgn * model) ** 2)
                                / np.sum(model ** 2))
                    best = min(best, float(d))
            devs[round(eig.sp.xi)] = best
    ratio = devs[20] / devs[10]
    rep.add("9-flat", "far-field deviation ratio xi=20 / xi=10",
            ratio, (0.25, 0.75), "in")


def check_model_integral(rep):
    phi_tilde = lambda x: np.exp(-4.0 * x ** 2)
    envelope = lambda x, r: (1.0 + (x * r) ** 2) ** -0.25
    worst = 0.0
    for t, ratio in ((50.0, 0.5), (50.0, SQRT2), (50.0, 1.6)):
        r = ratio * t
        a = evolve.model_integral(t, r, phi_tilde, envelope)
        b = evolve.model_integral_brute(t, r, phi_tilde, envelope)
        scale = max(abs(b), 1e-10)
        worst = max(worst, abs(a - b) / scale)
    rep.add("10-model", "region-split vs brute-force oracle", worst, 1e-6)
    base = abs(evolve.model_integral(25.0, 12.5, phi_tilde, envelope)) * 25.0
    worst_c = 0.0
    for t in (50.0, 100.0):
        worst_c = max(worst_c,
                      abs(evolve.model_integral(t, 0.5 * t, phi_tilde,
                                                envelope)) * t / base)
    rep.add("10-model", "|I| t / C off the cone", worst_c, 2.0)
    x0 = evolve.stationary_point(50.0, SQRT2 * 50.0)
    rep.add("10-model", "stationary point at r = sqrt(2) t", x0, 1e-6)


def check_refinement(rep, profile, cfg):
    """Halving the grid spacings must improve each transform defect >= 2x."""
    sec = cfg["refine_study"]
    results = []
    for refine in (1.0, 2.0):
        h = sec["r_points_per_osc"] / sec["xi_max"] / refine
        grid = RadialGrid.build(r_min=1e-4, r_max=sec["r_max"],
                                n_geo=int(sec["n_geo"] * np.sqrt(refine)),
                                n_uni=int((sec["r_max"] - 2.0) / h))
        spec = XiGridSpec.for_grid(r_max=sec["r_max"], xi_max=sec["xi_max"],
                                   phase_budget=sec["phase_budget"] / refine)
        from . import jost
        old = jost.ACCURACY
        jost.ACCURACY = refine
        try:
            prof = profile_on_grid(profile, grid)
            table = build_table(prof, spec, grid)
        finally:
            jost.ACCURACY = old
        grid_r = table.grid
        f = vortex_battery(grid_r)[0]
        xs = dft.signed_xi(table)
        dens = dft.SpectralDensity(xi=xs, values=spectral_bump(xs, 1.2, 0.5))
        results.append((dft.roundtrip_defect(f, table),
                        dft.spectral_roundtrip_defect(dens, table),
                        dft.plancherel_defect(f, f, table),
                        dft.diag_defect(f, table, profile_on_grid(profile, grid_r))))
    names = ["inverse-forward", "forward-inverse", "plancherel", "diag"]
    for k, name in enumerate(names):
        rep.add("5-transform", f"halving improvement: {name}",
                results[0][k] / max(results[1][k], 1e-16), 2.0, ">=")


def run_verify(cfg: dict | None = None, verbose: bool = True,
               skip: tuple = ()) -> dict:
    cfg = cfg or default_config()
    rep = Reporter(verbose=verbose)
    t_start = time.time()

    prof_sec = cfg["profile"]
    profile = solve_profile(
        RadialGrid.build(r_min=prof_sec["r_min"], r_max=prof_sec["r_max"],
                         n_geo=prof_sec["n_geo"], n_uni=prof_sec["n_uni"]),
        tol=prof_sec["tol"])

    grid60 = RadialGrid.build(r_min=1e-4, r_max=min(60.0, profile.grid.r_max),
                              n_geo=200, n_uni=900)
    if "1" not in skip:
        check_profile(rep, profile, grid60)

    tsec = cfg["transform"]
    tgrid = RadialGrid.build(**transform_grid_params(tsec))
    if "2" not in skip:
        check_resonance(rep, profile, tgrid)

    table = None
    if not {"3", "4", "5", "6"} <= set(skip):
        tspec = XiGridSpec.for_grid(r_max=tsec["r_max"], xi_max=tsec["xi_max"],
                                    xi_min=tsec["xi_min"],
                                    phase_budget=tsec["phase_budget"])
        tprof = profile_on_grid(profile, tgrid)
        table = build_table(tprof, tspec, tgrid)
    if "3" not in skip:
        check_table_structure(rep, table, "transform table")
        check_wronskian_constancy(rep, profile_on_grid(profile, tgrid), tgrid)

    sweep_eigs = []
    if "4" not in skip or "9" not in skip:
        ssec = cfg["scattering"]
        sgrid = RadialGrid.build(r_min=1e-4, r_max=ssec["r_max"],
                                 n_geo=ssec["n_geo"],
                                 n_uni=int((ssec["r_max"] - 2.0) / ssec["h_r"]))
        sprof = profile_on_grid(profile, sgrid)
        for xi in ssec["xi_nodes"]:
            eig = eigenfunction(SpectralPoint.from_xi(xi), sprof, sgrid)
            sweep_eigs.append((eig, scattering_coeffs(eig, sprof)))
    if "4" not in skip:
        check_scattering(rep, profile, table, sweep_eigs)
    if "5" not in skip:
        check_transforms(rep, profile, table, cfg["tolerances"]["quad_tol"])
        check_refinement(rep, profile, cfg)
    if "6" not in skip:
        check_zero_frequency(rep, table)

    if "7" not in skip or "8" not in skip:
        esec = cfg["evolve"]
        egrid = RadialGrid.build(r_min=1e-4, r_max=esec["r_max"],
                                 n_geo=esec["n_geo"],
                                 n_uni=int((esec["r_max"] - 2.0) / esec["h_r"]))
        espec = XiGridSpec.for_grid(r_max=esec["r_max"], xi_max=esec["xi_max"],
                                    xi_min=esec["xi_min"],
                                    phase_budget=esec["phase_budget"])
        eprof = profile_on_grid(profile, egrid)
        etable = build_table(eprof, espec, egrid)
        check_table_structure(rep, etable, "evolve table")
        check_decay(rep, profile, etable, np.asarray(esec["times"]),
                    esec["band"])

    if "9" not in skip:
        check_flat(rep, cfg)
        check_flat_decay(rep, cfg)
        check_cross(rep, sweep_eigs)
    if "10" not in skip:
        check_model_integral(rep)

    out = rep.report()
    out["runtime_s"] = time.time() - t_start
    out["config"] = cfg
    return out


def write_report(report: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
