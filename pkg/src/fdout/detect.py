"""Outlier detectors for functional samples.

Four families: the functional boxplot (fences around the envelope of the
deepest curves), the magnitude-shape plot (robust distances of per-curve
mean and variation of directional outlyingness), the TVD/MSS two-stage
procedure (shape outliers by a boxplot on shape similarity, then magnitude
outliers by a functional boxplot on total variation depth), and sequential
transformations (detect after each of a pipeline of normalising or
differencing transforms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import depths as _depths
from .depths import DEEPER_IS_LARGER, OUTLYING_IS_LARGER, DepthVector
from .dirout import decompose, directional_outlyingness, pointwise_sdo
from .errors import (
    BadCentralRegion,
    EmptySequence,
    OOnUnivariate,
    ShapeMismatch,
    TooFewCurves,
    UnknownDepthMethod,
    ValidationError,
)
from .fdcore import CurveSample, Grid, MultiCurveSample, RandomSource, ensure_valid
from .robust import FCutoff, fast_mcd, hardin_rocke_cutoff, robust_distances
from .tvd import modified_shape_similarity, total_variation_depth

__all__ = [
    "FunctionalBoxplotResult",
    "MsplotResult",
    "TvdmssResult",
    "SeqStage",
    "SeqTransformResult",
    "DEPTH_METHODS",
    "SEQ_STAGES",
    "depth_by_name",
    "functional_boxplot",
    "msplot",
    "tvdmss",
    "o_transform",
    "seq_transform",
    "stage_set_differences",
]

AnySample = Union[CurveSample, MultiCurveSample]

# orderings usable by functional boxplots and sequential transformations;
# rmd (robust distance of the MO/VO summary) is only meaningful per-sample
DEPTH_METHODS = ("bd", "mbd", "erld", "dq", "linf", "ed", "tvd", "rmd")
SEQ_STAGES = ("T0", "D0", "T1", "T2", "D1", "D2", "O")


@dataclass(frozen=True)
class FunctionalBoxplotResult:
    depth: DepthVector
    central_indices: np.ndarray
    envelope_lower: np.ndarray
    envelope_upper: np.ndarray
    fence_lower: np.ndarray
    fence_upper: np.ndarray
    outliers: np.ndarray


@dataclass(frozen=True)
class MsplotResult:
    outliers: np.ndarray
    mo: np.ndarray
    vo: np.ndarray
    distances: np.ndarray
    cutoff: FCutoff


@dataclass(frozen=True)
class TvdmssResult:
    shape_outliers: np.ndarray
    magnitude_outliers: np.ndarray
    outliers: np.ndarray
    tvd: np.ndarray
    mss: np.ndarray


@dataclass(frozen=True)
class SeqStage:
    label: str
    outliers: np.ndarray
    sample: Optional[AnySample]


@dataclass(frozen=True)
class SeqTransformResult:
    stages: tuple
    warnings: tuple


def depth_by_name(
    sample: AnySample,
    method: str,
    erld_type: Optional[str] = None,
    rng: Optional[RandomSource] = None,
) -> DepthVector:
    """Ordering scores for a sample under a named method.

    Univariate methods: bd, mbd, erld, dq, linf, ed, tvd. The rmd method
    orders by the robust distance of the (MO, VO) summary and works for any
    dimension (it is the only choice for multivariate data).
    """
    if method not in DEPTH_METHODS:
        raise UnknownDepthMethod(f"unknown depth method {method!r}")
    if method == "rmd":
        ms = msplot(sample, rng=rng)
        return DepthVector(ms.distances, OUTLYING_IS_LARGER, "rmd")
    if isinstance(sample, MultiCurveSample):
        if sample.d == 1:
            sample = sample.to_univariate()
        else:
            raise ValidationError(
                f"depth method {method!r} needs univariate curves; "
                "apply an O stage first or order by rmd"
            )
    if method == "bd":
        return _depths.band_depth(sample)
    if method == "mbd":
        return _depths.modified_band_depth(sample)
    if method == "erld":
        return _depths.extreme_rank_length(sample, type=erld_type or "two_sided")
    if method == "dq":
        return _depths.directional_quantile(sample)
    if method == "linf":
        return _depths.linfinity_depth(sample)
    if method == "ed":
        return _depths.extremal_depth(sample)
    return DepthVector(total_variation_depth(sample), DEEPER_IS_LARGER, "tvd")


def functional_boxplot(
    sample: CurveSample,
    depth: DepthVector,
    central_region: float = 0.5,
    factor: float = 1.5,
    central_count: Optional[int] = None,
) -> FunctionalBoxplotResult:
    """Flag curves leaving the inflated envelope of the deepest curves.

    The central region is the pointwise envelope of the ceil(n * central_region)
    deepest curves (``central_count`` overrides that count); fences sit
    ``factor`` times the envelope width beyond it, and any curve strictly
    outside a fence anywhere is an outlier.
    """
    ensure_valid(sample)
    values = sample.values
    n = sample.n
    if len(depth) != n:
        raise ShapeMismatch(f"depth has {len(depth)} scores for {n} curves")
    if not 0.0 < central_region < 1.0:
        raise BadCentralRegion(f"central_region must lie in (0, 1), got {central_region}")
    if not factor > 0.0:
        raise ValidationError(f"factor must be positive, got {factor}")
    if central_count is None:
        central_count = math.ceil(n * central_region)
    if not 1 <= central_count <= n:
        raise BadCentralRegion(
            f"central count {central_count} outside 1..{n}"
        )

    scores = depth.as_deeper_is_larger().scores
    order = np.argsort(-scores, kind="stable")
    central = np.sort(order[:central_count])
    envelope_lower = values[central].min(axis=0)
    envelope_upper = values[central].max(axis=0)
    spread = envelope_upper - envelope_lower
    fence_lower = envelope_lower - factor * spread
    fence_upper = envelope_upper + factor * spread
    exceed = (values > fence_upper[None, :]) | (values < fence_lower[None, :])
    return FunctionalBoxplotResult(
        depth=depth,
        central_indices=central,
        envelope_lower=envelope_lower,
        envelope_upper=envelope_upper,
        fence_lower=fence_lower,
        fence_upper=fence_upper,
        outliers=np.flatnonzero(exceed.any(axis=1)),
    )


def msplot(
    sample: AnySample,
    level: float = 0.05,
    coverage: Optional[float] = None,
    rng: Optional[RandomSource] = None,
) -> MsplotResult:
    """Magnitude-shape plot detection.

    Stacks the mean directional outlyingness MO (d columns) and its
    variation VO into an n x (d+1) cloud, fits a minimum covariance
    determinant estimate, and flags curves whose squared robust distance
    exceeds the F-approximation threshold at ``level``.
    """
    if isinstance(sample, CurveSample):
        sample = sample.to_multivariate()
    ensure_valid(sample)
    n, d = sample.n, sample.d
    if n <= 2 * (d + 1) + 2:
        raise TooFewCurves(f"msplot needs n > {2 * (d + 1) + 2}, got {n}")
    if rng is None:
        rng = RandomSource(0)
    field = directional_outlyingness(sample, rng=rng.child(0))
    summary = decompose(field)
    points = np.hstack([summary.mo, summary.vo[:, None]])
    fit = fast_mcd(points, coverage=coverage, rng=rng.child(1))
    distances = robust_distances(points, fit)
    cutoff = hardin_rocke_cutoff(n, d + 1, coverage=fit.coverage_fraction, level=level)
    return MsplotResult(
        outliers=np.flatnonzero(distances > cutoff.threshold),
        mo=summary.mo,
        vo=summary.vo,
        distances=distances,
        cutoff=cutoff,
    )


def tvdmss(
    sample: CurveSample,
    emp_factor_mss: float = 1.5,
    emp_factor_tvd: float = 1.5,
    central_region_tvd: float = 0.5,
) -> TvdmssResult:
    """Two-stage shape/magnitude detection via TVD and shape similarity.

    Shape outliers fall below the lower boxplot fence of the MSS values
    and are removed; a functional boxplot ordered by the total variation
    depth of the remaining curves (central size relative to the original
    n) flags magnitude outliers.
    """
    ensure_valid(sample)
    n = sample.n
    if n < 5:
        raise TooFewCurves(f"tvdmss needs n >= 5, got {n}")
    tvd_scores = total_variation_depth(sample)
    mss_scores = modified_shape_similarity(sample)

    q1, q3 = np.percentile(mss_scores, [25.0, 75.0])
    shape = np.flatnonzero(mss_scores < q1 - emp_factor_mss * (q3 - q1))

    keep = np.setdiff1d(np.arange(n), shape)
    if keep.size == 0:
        magnitude = np.array([], dtype=np.intp)
    else:
        remainder = CurveSample(sample.values[keep], sample.grid)
        depth = DepthVector(
            total_variation_depth(remainder), DEEPER_IS_LARGER, "tvd"
        )
        central_count = min(math.ceil(n * central_region_tvd), keep.size)
        box = functional_boxplot(
            remainder, depth, factor=emp_factor_tvd, central_count=central_count
        )
        magnitude = keep[box.outliers]

    return TvdmssResult(
        shape_outliers=shape,
        magnitude_outliers=magnitude,
        outliers=np.union1d(shape, magnitude).astype(np.intp),
        tvd=tvd_scores,
        mss=mss_scores,
    )


def o_transform(sample: MultiCurveSample, rng: Optional[RandomSource] = None) -> CurveSample:
    """Univariate sample of pointwise outlyingness magnitudes (all >= 0)."""
    ensure_valid(sample)
    if sample.n < 3:
        raise TooFewCurves(f"the O transform needs n >= 3, got {sample.n}")
    magnitudes = pointwise_sdo(sample, rng=rng)
    return CurveSample(magnitudes, sample.grid, ids=sample.ids)


def _center_rows(sample: CurveSample) -> tuple[CurveSample, list]:
    values = sample.values
    centered = values - values.mean(axis=1, keepdims=True)
    return CurveSample(centered, sample.grid, ids=sample.ids), []


def _normalise_rows(sample: CurveSample) -> tuple[CurveSample, list]:
    values = sample.values
    rms = np.sqrt((values * values).mean(axis=1))
    degenerate = np.flatnonzero(rms == 0.0)
    safe = np.where(rms > 0.0, rms, 1.0)
    out = values / safe[:, None]
    warnings = []
    if degenerate.size:
        warnings.append(
            f"normalisation left zero-norm curves as zeros: rows {degenerate.tolist()}"
        )
    return CurveSample(out, sample.grid, ids=sample.ids), warnings


def _difference_rows(sample: CurveSample) -> tuple[CurveSample, list]:
    values = np.diff(sample.values, axis=1)
    grid = Grid(sample.grid.points[1:])
    return CurveSample(values, grid, ids=sample.ids), []


def _stage_labels(sequence: list, warnings: list) -> list:
    counts = {}
    for name in sequence:
        counts[name] = counts.get(name, 0) + 1
    seen = {}
    labels = []
    for name in sequence:
        if counts[name] > 1:
            seen[name] = seen.get(name, 0) + 1
            labels.append(f"{name}_{seen[name]}")
        else:
            labels.append(name)
    duplicated = sorted(name for name, c in counts.items() if c > 1)
    if duplicated:
        warnings.append(
            f"duplicate stage names {duplicated} relabelled with numeric suffixes"
        )
    return labels


def seq_transform(
    sample: AnySample,
    sequence,
    depth_method: str = "mbd",
    erld_type: Optional[str] = None,
    save_data: bool = False,
    rng: Optional[RandomSource] = None,
    central_region: float = 0.5,
    factor: float = 1.5,
) -> SeqTransformResult:
    """Detect outliers after each transformation in ``sequence``.

    Stages: T0/D0 detect on the data as it stands; T1 subtracts each
    curve's grid mean; T2 divides each curve by its root-mean-square over
    the grid (zero-norm curves stay zero, with a warning); D1/D2 take
    lag-1 differences, dropping the first grid point; O replaces
    multivariate curves by their pointwise outlyingness magnitudes.

    Every stage's raw flag set comes from a functional boxplot under
    ``depth_method``; no curves are removed between stages. Use
    :func:`stage_set_differences` for first-flagged-at classification.
    """
    sequence = list(sequence)
    if not sequence:
        raise EmptySequence("sequence must name at least one stage")
    for name in sequence:
        if name not in SEQ_STAGES:
            raise ValidationError(
                f"unknown stage {name!r}; stages are {', '.join(SEQ_STAGES)}"
            )
    if depth_method not in DEPTH_METHODS:
        raise UnknownDepthMethod(f"unknown depth method {depth_method!r}")
    ensure_valid(sample)
    if rng is None:
        rng = RandomSource(0)

    warnings: list = []
    labels = _stage_labels(sequence, warnings)
    current: AnySample = sample
    if isinstance(current, MultiCurveSample) and current.d == 1:
        current = current.to_univariate()
    stages = []
    for position, (name, label) in enumerate(zip(sequence, labels)):
        stage_rng = rng.child(position)
        multivariate = isinstance(current, MultiCurveSample)
        if name == "O":
            if not multivariate:
                raise OOnUnivariate("the O stage needs multivariate curves")
            current = o_transform(current, rng=stage_rng.child(0))
        elif multivariate:
            raise ValidationError(
                f"stage {name} needs univariate curves; apply an O stage first"
            )
        elif name in ("T0", "D0"):
            pass
        else:
            if name == "T1":
                current, extra = _center_rows(current)
            elif name == "T2":
                current, extra = _normalise_rows(current)
            else:
                current, extra = _difference_rows(current)
            warnings.extend(extra)

        depth = depth_by_name(
            current, depth_method, erld_type=erld_type, rng=stage_rng.child(1)
        )
        box = functional_boxplot(
            current, depth, central_region=central_region, factor=factor
        )
        stages.append(
            SeqStage(
                label=label,
                outliers=box.outliers,
                sample=current if save_data else None,
            )
        )
    return SeqTransformResult(stages=tuple(stages), warnings=tuple(warnings))


def stage_set_differences(result: SeqTransformResult):
    """(label, newly flagged indices) per stage: the stage set minus all
    earlier stage sets, the classification arithmetic of the sequential
    procedure."""
    seen = np.array([], dtype=np.intp)
    out = []
    for stage in result.stages:
        new = np.setdiff1d(stage.outliers, seen)
        out.append((stage.label, new))
        seen = np.union1d(seen, stage.outliers)
    return out
