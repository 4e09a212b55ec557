"""Command-line entry points.

Subcommands: profile, eigen, table, dft, evolve, flat, verify.  A JSON
config file (see `vortexdft config --preset desk`) drives every run; CLI
flags override individual fields.  Failures exit nonzero with a
machine-readable error JSON on stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import (default_config, load_config, save_config, section_hash,
                     transform_grid_params)
from .eigen import (XiGridSpec, build_table, eigenfunction, load_table,
                    save_table, table_cache_key)
from .grids import RadialGrid
from .odesys import SpectralPoint
from .profile import load_profile, save_profile, solve_profile
from .verify import profile_on_grid, run_verify, write_report


def _fail(message: str, **extra) -> int:
    print(json.dumps({"error": message, **extra}, sort_keys=True))
    return 2


def _load_cfg(args) -> dict:
    if args.config:
        return load_config(args.config)
    return default_config(args.preset)


def _profile_path(cfg: dict) -> Path:
    cache = Path(cfg["cache_dir"])
    cache.mkdir(parents=True, exist_ok=True)
    key = section_hash(cfg, "profile", version=__version__)
    return cache / f"profile-{key}.bin"


def _get_profile(cfg: dict):
    path = _profile_path(cfg)
    if path.exists():
        return load_profile(path), True
    sec = cfg["profile"]
    grid = RadialGrid.build(r_min=sec["r_min"], r_max=sec["r_max"],
                            n_geo=sec["n_geo"], n_uni=sec["n_uni"])
    prof = solve_profile(grid, tol=sec["tol"])
    save_profile(path, prof, tol=sec["tol"])
    return prof, False


def _get_table(cfg: dict, section: str):
    profile, _ = _get_profile(cfg)
    sec = cfg[section]
    grid = RadialGrid.build(**transform_grid_params(sec))
    spec = XiGridSpec.for_grid(r_max=sec["r_max"], xi_max=sec["xi_max"],
                               xi_min=sec["xi_min"],
                               phase_budget=sec["phase_budget"])
    prof = profile_on_grid(profile, grid)
    cache = Path(cfg["cache_dir"])
    cache.mkdir(parents=True, exist_ok=True)
    key = table_cache_key(prof, spec, grid, __version__)
    path = cache / f"table-{section}-{key}.bin"
    if path.exists():
        return load_table(path), prof, True
    table = build_table(prof, spec, grid)
    save_table(path, table)
    return table, prof, False


def cmd_config(args) -> int:
    cfg = default_config(args.preset)
    save_config(cfg, args.out)
    print(json.dumps({"written": str(args.out), "preset": args.preset}))
    return 0


def cmd_profile(args) -> int:
    cfg = _load_cfg(args)
    prof, cached = _get_profile(cfg)
    out = {"slope_a": prof.slope_a, "cache_hit": cached,
           "r_max": prof.grid.r_max, "path": str(_profile_path(cfg))}
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "rho", "drho"])  # radii, profile, derivative
            for r, a, b in zip(prof.grid.nodes, prof.rho, prof.drho):
                w.writerow([f"{r:.17g}", f"{a:.17g}", f"{b:.17g}"])
        out["csv"] = args.csv
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_table(args) -> int:
    cfg = _load_cfg(args)
    table, _, cached = _get_table(cfg, args.section)
    print(json.dumps({"cache_hit": cached, "n_xi": table.nxi,
                      "content_hash": table.content_hash()}, sort_keys=True))
    return 0


def cmd_eigen(args) -> int:
    cfg = _load_cfg(args)
    if args.xi == 0.0:
        return _fail("xi = 0 is excluded from the eigenfunction family; "
                     "its continuous limit sqrt(pi/4) Xi0 is stored with "
                     "the table (psi0)")
    profile, _ = _get_profile(cfg)
    sec = cfg["transform"]
    grid = RadialGrid.build(**transform_grid_params(sec))
    prof = profile_on_grid(profile, grid)
    sp = SpectralPoint.from_xi(abs(args.xi))
    eig = eigenfunction(sp, prof, grid)
    vals = eig.samples if args.xi > 0 else -eig.samples[:, ::-1]
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "Re u", "Im u", "Re v", "Im v"])
        for r, (u, v) in zip(grid.nodes, vals):
            w.writerow([f"{r:.17g}", f"{np.real(u):.17g}", f"{np.imag(u):.17g}",
                        f"{np.real(v):.17g}", f"{np.imag(v):.17g}"])
    print(json.dumps({"xi": args.xi, "gamma": list(eig.gamma),
                      "gap": eig.coeffs.gap, "out": args.out}, sort_keys=True))
    return 0


def _read_field_csv(path, grid: RadialGrid):
    rows = np.loadtxt(path, delimiter=",", skiprows=1)
    if rows.shape[0] != grid.nodes.size:
        raise ValueError("field CSV does not match the configured grid")
    vals = rows[:, 1] + 1j * rows[:, 2]
    vals2 = rows[:, 3] + 1j * rows[:, 4]
    return np.stack([vals, vals2], axis=1)


def cmd_dft(args) -> int:
    from .dft import RadialField, SpectralDensity, forward, inverse, signed_xi
    cfg = _load_cfg(args)
    table, _, _ = _get_table(cfg, "transform")
    if args.direction == "forward":
        vals = _read_field_csv(args.infile, table.grid)
        dens = forward(RadialField(table.grid, vals), table)
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["xi", "Re zeta", "Im zeta"])
            for x, z in zip(dens.xi, dens.values):
                w.writerow([f"{x:.17g}", f"{z.real:.17g}", f"{z.imag:.17g}"])
        print(json.dumps({"out": args.out, "tail_bound": dens.tail_bound},
                         sort_keys=True))
    else:
        rows = np.loadtxt(args.infile, delimiter=",", skiprows=1)
        dens = SpectralDensity(xi=rows[:, 0], values=rows[:, 1] + 1j * rows[:, 2])
        if dens.xi.size != 2 * table.nxi or not np.allclose(dens.xi, signed_xi(table)):
            return _fail("density CSV grid does not match the table")
        field = inverse(dens, table)
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "Re u", "Im u", "Re v", "Im v"])
            for r, (u, v) in zip(table.grid.nodes, field.values):
                w.writerow([f"{r:.17g}", f"{u.real:.17g}", f"{u.imag:.17g}",
                            f"{v.real:.17g}", f"{v.imag:.17g}"])
        print(json.dumps({"out": args.out}, sort_keys=True))
    return 0


def cmd_evolve(args) -> int:
    from .dft import RadialField
    from .evolve import fit_decay, orthogonality, propagate
    cfg = _load_cfg(args)
    table, prof, _ = _get_table(cfg, "evolve")
    vals = _read_field_csv(args.infile, table.grid)
    field = RadialField(table.grid, vals)
    times = np.linspace(args.t0, args.t1, args.steps) if args.steps > 1 \
        else np.array([args.t0])
    sups, l2s = [], []
    for t in times:
        res = propagate(field, float(t), table)
        sups.append(res.sup_norm)
        l2s.append(res.l2_norm)
    report = {
        "times": list(map(float, times)),
        "sup_norms": sups,
        "l2_norms": l2s,
        "orthogonality": [abs(p) for p in orthogonality(field, prof)],
    }
    if times.size >= 5 and times[0] > 0:
        try:
            exp, r2 = fit_decay(times, sups)
            report["sup_exponent"] = exp
            report["sup_fit_r2"] = r2
        except ValueError:
            pass
    Path(args.report).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(json.dumps({"report": args.report}, sort_keys=True))
    return 0


def cmd_flat(args) -> int:
    from .flat import FlatTransform
    cfg = _load_cfg(args)
    sec = cfg["flat"]
    grid = RadialGrid.build(**transform_grid_params(sec))
    spec = XiGridSpec.for_grid(r_max=sec["r_max"], xi_max=sec["xi_max"],
                               xi_min=sec["xi_min"],
                               phase_budget=sec["phase_budget"])
    ft = FlatTransform(grid, spec)
    if args.action == "check":
        from .verify import flat_battery
        worst = max(ft.roundtrip_defect(v) for v in flat_battery(grid))
        print(json.dumps({"flat_roundtrip_defect": worst}, sort_keys=True))
        return 0
    vals = _read_field_csv(args.infile, grid)
    out = ft.propagate(vals, args.t)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "Re u", "Im u", "Re v", "Im v"])
        for r, (u, v) in zip(grid.nodes, out):
            w.writerow([f"{r:.17g}", f"{u.real:.17g}", f"{u.imag:.17g}",
                        f"{v.real:.17g}", f"{v.imag:.17g}"])
    print(json.dumps({"out": args.out}, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    cfg = _load_cfg(args)
    report = run_verify(cfg, verbose=not args.quiet,
                        skip=tuple(args.skip.split(",")) if args.skip else ())
    write_report(report, args.report)
    print(json.dumps({"passed": report["passed"],
                      "n_checks": report["n_checks"],
                      "n_failed": report["n_failed"],
                      "report": args.report}, sort_keys=True))
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vortexdft", description=__doc__)
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--preset", default="desk", choices=("desk", "quick"))
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("config", help="write a preset config file")
    c.add_argument("--out", default="vortexdft.json")
    c.set_defaults(fn=cmd_config)

    c = sub.add_parser("profile", help="solve/cache the vortex profile")
    c.add_argument("--csv", help="write (r, rho, rho') columns")
    c.set_defaults(fn=cmd_profile)

    c = sub.add_parser("table", help="build/cache an eigenfunction table")
    c.add_argument("--section", default="transform",
                   choices=("transform", "evolve"))
    c.set_defaults(fn=cmd_table)

    c = sub.add_parser("eigen", help="dump one eigenfunction as CSV")
    c.add_argument("--xi", type=float, required=True)
    c.add_argument("--out", default="eigenfunction.csv")
    c.set_defaults(fn=cmd_eigen)

    c = sub.add_parser("dft", help="apply the transform to CSV data")
    c.add_argument("direction", choices=("forward", "inverse"))
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_dft)

    c = sub.add_parser("evolve", help="propagate CSV data, report norms")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--t0", type=float, default=10.0)
    c.add_argument("--t1", type=float, default=100.0)
    c.add_argument("--steps", type=int, default=7)
    c.add_argument("--report", default="evolve-report.json")
    c.set_defaults(fn=cmd_evolve)

    c = sub.add_parser("flat", help="flat-background oracle")
    c.add_argument("action", choices=("evolve", "check"))
    c.add_argument("--in", dest="infile")
    c.add_argument("--t", type=float, default=0.0)
    c.add_argument("--out", default="flat-out.csv")
    c.set_defaults(fn=cmd_flat)

    c = sub.add_parser("verify", help="run the acceptance suite")
    c.add_argument("--report", default="verify-report.json")
    c.add_argument("--quiet", action="store_true")
    c.add_argument("--skip", default="", help="comma list of criteria ids")
    c.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        return _fail(f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
