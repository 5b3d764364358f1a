"""Synthetic curve samples with planted outliers.

Nine contamination models over a common base process X(t) = 4t + e(t),
e a zero-mean Gaussian process with exponential covariance on [0, 1].
Each model returns the sample together with the indices of the rows it
contaminated, so detectors can be scored against ground truth.

Random draws follow a fixed stream discipline: child stream 0 of the seed
draws the base noise for all n rows, child 1 draws the Bernoulli row
selection, child 2 draws contamination parameters. Bulk rows are therefore
identical across models (and contamination rates) for the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BadModel, BadRate, CovarianceNotPD, TooFewCurves
from .fdcore import CurveSample, Grid, RandomSource, uniform_grid

__all__ = [
    "GaussianProcessSpec",
    "SimulationOutput",
    "gp_sample",
    "simulation_model",
    "MODEL_IDS",
]

MODEL_IDS = tuple(range(1, 10))


@dataclass(frozen=True)
class GaussianProcessSpec:
    """Gaussian process with covariance amplitude * exp(-range * |s-t|^exponent)."""

    amplitude: float = 1.0
    range_: float = 1.0
    exponent: float = 1.0
    mean: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class SimulationOutput:
    data: CurveSample
    true_outliers: np.ndarray
    model_id: int
    params: dict


def _cholesky_factor(spec: GaussianProcessSpec, grid: Grid) -> np.ndarray:
    t = grid.points
    lags = np.abs(t[:, None] - t[None, :])
    cov = spec.amplitude * np.exp(-spec.range_ * lags ** spec.exponent)
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        pass
    jitter = 1e-10 * np.eye(t.size)
    try:
        return np.linalg.cholesky(cov + jitter)
    except np.linalg.LinAlgError:
        raise CovarianceNotPD(
            "covariance matrix not positive definite even after jitter"
        ) from None


def gp_sample(spec: GaussianProcessSpec, grid: Grid, n: int, rng: RandomSource) -> CurveSample:
    """n Gaussian-process paths on the grid, via the lower Cholesky factor."""
    if n < 1:
        raise TooFewCurves(f"gp_sample needs n >= 1, got {n}")
    factor = _cholesky_factor(spec, grid)
    z = rng.standard_normal((n, grid.size))
    paths = z @ factor.T
    if spec.mean is not None:
        paths = paths + spec.mean(grid.points)[None, :]
    return CurveSample(paths, grid)


_BASE_TREND = 4.0


def _select_outliers(n: int, rate: float, deterministic: bool, rng: RandomSource) -> np.ndarray:
    if deterministic:
        k = int(np.ceil(n * rate))
        if k == 0:
            return np.array([], dtype=np.intp)
        return np.unique((np.arange(k) * n) // k).astype(np.intp)
    return np.flatnonzero(rng.uniform(size=n) < rate).astype(np.intp)


def _signs(rng: RandomSource, k: int) -> np.ndarray:
    return rng.integers(0, 2, size=k) * 2 - 1


_DEFAULTS = {
    "gp_amplitude": 1.0,
    "gp_range": 1.0,
    "gp_exponent": 1.0,
    "shift": 8.0,
    "interval_length": None,
    "phase_shift": 0.15,
    "amplitude_low": 1.5,
    "amplitude_high": 2.0,
    "outlier_gp_amplitude": 8.0,
    "outlier_gp_range": 2.0,
    "outlier_gp_exponent": 0.5,
    "wave_amplitude": 2.0,
    "wave_cycles": None,
}

_ALLOWED_OVERRIDES = {
    1: {"shift"},
    2: {"shift", "interval_length"},
    3: {"shift"},
    4: set(),
    5: {"outlier_gp_amplitude", "outlier_gp_range", "outlier_gp_exponent"},
    6: {"wave_amplitude", "wave_cycles"},
    7: {"phase_shift"},
    8: {"amplitude_low", "amplitude_high"},
    9: {"wave_amplitude", "wave_cycles", "interval_length"},
}
_GP_OVERRIDES = {"gp_amplitude", "gp_range", "gp_exponent"}


def simulation_model(
    k: int,
    n: int = 100,
    p: int = 50,
    outlier_rate: float = 0.1,
    deterministic: bool = False,
    seed: int = 0,
    **overrides,
) -> SimulationOutput:
    """Sample model ``k`` (1..9) with planted outliers at ``outlier_rate``.

    Models: 1 persistent magnitude shift, 2 short magnitude spike,
    3 partial magnitude shift from a random onset, 4 reversed trend,
    5 rougher and wider noise covariance, 6 added low-frequency wave,
    7 phase-shifted periodic mean, 8 inflated periodic amplitude,
    9 high-frequency oscillation on a random subinterval.

    ``deterministic`` plants exactly ceil(n * rate) outliers at evenly
    spaced rows instead of Bernoulli selection.
    """
    if k not in MODEL_IDS:
        raise BadModel(f"model must be in 1..9, got {k}")
    if not 0.0 <= outlier_rate <= 1.0:
        raise BadRate(f"outlier rate must lie in [0, 1], got {outlier_rate}")
    if n < 1:
        raise TooFewCurves(f"need n >= 1, got {n}")
    unknown = set(overrides) - _ALLOWED_OVERRIDES[k] - _GP_OVERRIDES
    if unknown:
        raise BadModel(f"model {k} does not accept overrides: {sorted(unknown)}")
    cfg = dict(_DEFAULTS)
    if cfg["interval_length"] is None:
        cfg["interval_length"] = 0.04 if k == 2 else 0.2
    if cfg["wave_cycles"] is None:
        cfg["wave_cycles"] = 2.0 if k == 6 else 20.0
    cfg.update(overrides)

    grid = uniform_grid(p, 0.0, 1.0)
    t = grid.points
    root = RandomSource(seed)
    base_spec = GaussianProcessSpec(
        amplitude=cfg["gp_amplitude"],
        range_=cfg["gp_range"],
        exponent=cfg["gp_exponent"],
    )
    noise = gp_sample(base_spec, grid, n, root.child(0)).values
    out_rows = _select_outliers(n, outlier_rate, deterministic, root.child(1))
    n_out = out_rows.size
    crng = root.child(2)

    periodic_bulk = k in (7, 8)
    if periodic_bulk:
        values = 4.0 * np.sin(2.0 * np.pi * t)[None, :] + noise
    else:
        values = _BASE_TREND * t[None, :] + noise

    if n_out:
        if k == 1:
            values[out_rows] += cfg["shift"] * _signs(crng, n_out)[:, None]
        elif k == 2:
            signs = _signs(crng, n_out)
            length = cfg["interval_length"]
            starts = crng.uniform(0.0, 1.0 - length, size=n_out)
            inside = (t[None, :] >= starts[:, None]) & (t[None, :] <= (starts + length)[:, None])
            values[out_rows] += cfg["shift"] * signs[:, None] * inside
        elif k == 3:
            signs = _signs(crng, n_out)
            onsets = crng.uniform(0.2, 0.8, size=n_out)
            values[out_rows] += cfg["shift"] * signs[:, None] * (t[None, :] >= onsets[:, None])
        elif k == 4:
            values[out_rows] += 4.0 - 8.0 * t[None, :]
        elif k == 5:
            out_spec = GaussianProcessSpec(
                amplitude=cfg["outlier_gp_amplitude"],
                range_=cfg["outlier_gp_range"],
                exponent=cfg["outlier_gp_exponent"],
            )
            rough = gp_sample(out_spec, grid, n_out, crng).values
            values[out_rows] = _BASE_TREND * t[None, :] + rough
        elif k == 6:
            wave = cfg["wave_amplitude"] * np.sin(2.0 * np.pi * cfg["wave_cycles"] * t)
            values[out_rows] += wave[None, :]
        elif k == 7:
            signs = _signs(crng, n_out)
            shifted = 4.0 * np.sin(
                2.0 * np.pi * (t[None, :] + cfg["phase_shift"] * signs[:, None])
            )
            values[out_rows] += shifted - 4.0 * np.sin(2.0 * np.pi * t)[None, :]
        elif k == 8:
            theta = crng.uniform(cfg["amplitude_low"], cfg["amplitude_high"], size=n_out)
            values[out_rows] += 4.0 * (theta[:, None] - 1.0) * np.sin(2.0 * np.pi * t)[None, :]
        else:
            length = cfg["interval_length"]
            starts = crng.uniform(0.0, 1.0 - length, size=n_out)
            inside = (t[None, :] >= starts[:, None]) & (t[None, :] <= (starts + length)[:, None])
            wave = cfg["wave_amplitude"] * np.sin(2.0 * np.pi * cfg["wave_cycles"] * t)
            values[out_rows] += wave[None, :] * inside

    params = dict(cfg)
    params.update(
        model=k, n=n, p=p, outlier_rate=outlier_rate,
        deterministic=deterministic, seed=seed,
    )
    return SimulationOutput(
        data=CurveSample(values, grid),
        true_outliers=np.sort(out_rows),
        model_id=k,
        params=params,
    )
