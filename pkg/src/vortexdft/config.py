"""Run configuration: a single JSON document, CLI flags override fields.

The `desk` preset sizes every grid so the full acceptance suite holds its
stated tolerances while staying inside a laptop-scale time budget; the
`quick` preset is for smoke runs and unit tests.
"""

from __future__ import annotations

import copy
import hashlib
import json
from pathlib import Path

import numpy as np

CONFIG_VERSION = 1


DESK = {
    "config_version": CONFIG_VERSION,
    "profile": {"r_min": 1e-4, "r_max": 208.0, "n_geo": 240, "n_uni": 1600,
                "tol": 1e-10},
    "constants": {"y0": 0.5, "lambda_switch": 0.5, "kappa_rmatch_cap": 6.5},
    "tolerances": {"ode_tol": 1e-11, "match_gap": 1e3, "quad_tol": 1e-3},
    "transform": {
        "r_max": 40.0, "n_geo": 220, "r_points_per_osc": 0.125,
        "xi_min": 1e-3, "xi_max": 6.0, "phase_budget": 0.35,
    },
    "scattering": {"xi_nodes": [5.0, 6.5, 8.0, 10.0, 12.5, 16.0, 20.0],
                   "r_max": 60.0, "n_geo": 200, "h_r": 0.02},
    "refine_study": {"r_max": 25.0, "xi_max": 5.0, "n_geo": 160,
                     "r_points_per_osc": 0.14, "phase_budget": 0.42},
    "evolve": {"r_max": 208.0, "n_geo": 200, "h_r": 0.16,
               "xi_min": 2e-3, "xi_max": 0.62, "phase_budget": 0.33,
               "band": 0.18, "times": [10.0, 14.7, 21.5, 31.6, 46.4, 68.1, 100.0]},
    "flat": {"r_max": 40.0, "n_geo": 280, "h_r": 0.006,
             "xi_min": 5e-4, "xi_max": 6.0, "phase_budget": 0.08},
    "cache_dir": "cache",
    "output_dir": "out",
}

QUICK = copy.deepcopy(DESK)
QUICK.update({
    "profile": {"r_min": 1e-4, "r_max": 60.0, "n_geo": 200, "n_uni": 700,
                "tol": 1e-10},
    "transform": {"r_max": 30.0, "n_geo": 160, "r_points_per_osc": 0.2,
                  "xi_min": 2e-3, "xi_max": 4.0, "phase_budget": 0.5},
    "scattering": {"xi_nodes": [5.0, 10.0], "r_max": 50.0, "n_geo": 160,
                   "h_r": 0.05},
    "evolve": {"r_max": 120.0, "n_geo": 160, "h_r": 0.25,
               "xi_min": 4e-3, "xi_max": 0.6, "phase_budget": 0.4,
               "band": 0.18, "times": [10.0, 17.8, 31.6, 56.2, 100.0]},
    "flat": {"r_max": 30.0, "n_geo": 200, "h_r": 0.02,
             "xi_min": 1e-3, "xi_max": 5.0, "phase_budget": 0.12},
})

PRESETS = {"desk": DESK, "quick": QUICK}


def default_config(preset: str = "desk") -> dict:
    return copy.deepcopy(PRESETS[preset])


def load_config(path) -> dict:
    cfg = json.loads(Path(path).read_text())
    if cfg.get("config_version") != CONFIG_VERSION:
        raise ValueError("unsupported config version")
    return cfg


def save_config(cfg: dict, path) -> None:
    Path(path).write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n")


def section_hash(cfg: dict, *sections: str, version: str = "") -> str:
    payload = {s: cfg[s] for s in sections}
    blob = json.dumps(payload, sort_keys=True) + version
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def transform_grid_params(sec: dict) -> dict:
    """Radial grid parameters from a transform-style config section."""
    h = sec.get("h_r")
    if h is None:
        h = sec["r_points_per_osc"] / sec["xi_max"]
    n_uni = int(np.ceil((sec["r_max"] - 2.0) / h)) + 1
    return {"r_min": 1e-4, "r_max": sec["r_max"], "n_geo": sec["n_geo"],
            "n_uni": n_uni}
