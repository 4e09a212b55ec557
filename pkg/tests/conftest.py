"""Shared fixtures: one profile solve and one small eigen table per session."""

import numpy as np
import pytest

from vortexdft.eigen import XiGridSpec, build_table
from vortexdft.grids import RadialGrid
from vortexdft.profile import solve_profile
from vortexdft.verify import profile_on_grid


@pytest.fixture(scope="session")
def profile60():
    grid = RadialGrid.build(r_min=1e-4, r_max=60.0, n_geo=200, n_uni=900)
    return solve_profile(grid)


@pytest.fixture(scope="session")
def grid30():
    return RadialGrid.build(r_min=1e-4, r_max=30.0, n_geo=160, n_uni=1000)


@pytest.fixture(scope="session")
def profile30(profile60, grid30):
    return profile_on_grid(profile60, grid30)


@pytest.fixture(scope="session")
def table30(profile30, grid30):
    spec = XiGridSpec.for_grid(r_max=30.0, xi_max=4.0, xi_min=2e-3,
                               phase_budget=0.45)
    return build_table(profile30, spec, grid30)
