import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fdout import CurveSample, Grid, MultiCurveSample, uniform_grid

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def make_sample(values, a=0.0, b=1.0, grid=None, ids=None):
    values = np.asarray(values, dtype=float)
    if grid is None:
        grid = uniform_grid(values.shape[1], a, b)
    elif not isinstance(grid, Grid):
        grid = Grid(np.asarray(grid, dtype=float))
    return CurveSample(values, grid, ids=ids)


def make_multi(values, a=0.0, b=1.0, grid=None):
    values = np.asarray(values, dtype=float)
    if grid is None:
        grid = uniform_grid(values.shape[1], a, b)
    elif not isinstance(grid, Grid):
        grid = Grid(np.asarray(grid, dtype=float))
    return MultiCurveSample(values, grid)


def constant_curves(levels, p=4):
    """One flat curve per level; the workhorse hand-checkable fixture."""
    levels = np.asarray(levels, dtype=float)
    return make_sample(np.repeat(levels[:, None], p, axis=1))


@pytest.fixture
def np_rng():
    return np.random.default_rng(20260825)
