"""CSV ingestion and serialisation of curve samples.

Wide layout: one CSV, one row per curve, an optional header row holding
the grid points and an optional leading id column. Values are written with
``repr`` so a write/read round trip reproduces every float bit for bit.
Multivariate samples use one wide CSV per dimension with identical shapes
and grids.
"""

from __future__ import annotations

import csv
import os
from typing import Optional, Sequence, Union

import numpy as np

from .errors import EmptyInput, ParseError, ShapeMismatch
from .fdcore import CurveSample, Grid, MultiCurveSample, uniform_grid

__all__ = [
    "read_curves",
    "write_curves",
    "read_truth",
    "write_truth",
    "atomic_write_text",
]


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    partial file."""
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _parse_cell(cell: str, line: int, column: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(line, column, f"could not parse {cell!r} as a number") from None


def _read_wide(path: str, header, id_column):
    with open(path, "r", encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle) if row and any(c.strip() for c in row)]
    if not rows:
        raise EmptyInput(f"{path} holds no data")
    width = len(rows[0])
    for k, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(k + 1, len(row) + 1,
                             f"row has {len(row)} cells, expected {width}")

    if id_column == "auto":
        has_ids = not _is_float(rows[-1][0].strip())
    else:
        has_ids = bool(id_column)
    first = rows[0][1:] if has_ids else rows[0]
    if header == "auto":
        cells = [c.strip() for c in first]
        if any(not _is_float(c) for c in cells):
            has_header = True
        elif len(rows) >= 2:
            numbers = np.array([float(c) for c in cells])
            has_header = bool(numbers.size >= 2 and np.all(np.diff(numbers) > 0))
        else:
            has_header = False
    else:
        has_header = bool(header)

    grid_points = None
    if has_header:
        cells = [c.strip() for c in first]
        if all(_is_float(c) for c in cells):
            grid_points = np.array([float(c) for c in cells])
        data_rows = rows[1:]
        offset = 1
    else:
        data_rows = rows
        offset = 0
    if not data_rows:
        raise EmptyInput(f"{path} holds a header but no curves")

    ids = [row[0].strip() for row in data_rows] if has_ids else None
    shift = 1 if has_ids else 0
    values = np.empty((len(data_rows), width - shift))
    for r, row in enumerate(data_rows):
        for c, cell in enumerate(row[shift:]):
            values[r, c] = _parse_cell(cell.strip(), r + 1 + offset, c + 1 + shift)

    p = values.shape[1]
    if grid_points is not None:
        if grid_points.size != p:
            raise ShapeMismatch(f"grid header has {grid_points.size} points for {p} columns")
        grid = Grid(grid_points)
    else:
        grid = uniform_grid(p, 0.0, 1.0)
    return values, grid, ids


def read_curves(
    paths: Union[str, Sequence[str]],
    layout: str = "wide",
    header="auto",
    id_column="auto",
) -> Union[CurveSample, MultiCurveSample]:
    """Load one wide CSV as a CurveSample, or several (one per dimension,
    identical shapes and grids) as a MultiCurveSample.

    ``header`` and ``id_column`` accept True/False or "auto". Auto header
    detection treats the first row as grid points when it is non-numeric
    or strictly increasing; auto id detection checks whether the last
    row's first cell is numeric. A missing grid defaults to uniform [0, 1].
    """
    if isinstance(paths, (str, os.PathLike)):
        paths = [paths]
    paths = list(paths)
    if layout not in ("wide", "per-dimension"):
        raise ShapeMismatch(f"unknown layout {layout!r}")
    if layout == "wide" and len(paths) > 1:
        layout = "per-dimension"

    parsed = [_read_wide(str(path), header, id_column) for path in paths]
    if layout == "wide":
        values, grid, ids = parsed[0]
        return CurveSample(values, grid, ids=ids)

    base_values, base_grid, base_ids = parsed[0]
    stack = [base_values]
    for path, (values, grid, _ids) in zip(paths[1:], parsed[1:]):
        if values.shape != base_values.shape:
            raise ShapeMismatch(
                f"{path} is {values.shape[0]}x{values.shape[1]}, expected "
                f"{base_values.shape[0]}x{base_values.shape[1]}"
            )
        if grid.size != base_grid.size or not np.array_equal(grid.points, base_grid.points):
            raise ShapeMismatch(f"{path} has a different grid")
        stack.append(values)
    return MultiCurveSample(np.stack(stack, axis=2), base_grid, ids=base_ids)


def write_curves(path: str, sample: Union[CurveSample, MultiCurveSample],
                 include_header: bool = True) -> None:
    """Serialise a univariate sample as a wide CSV (repr floats)."""
    if isinstance(sample, MultiCurveSample):
        raise ShapeMismatch(
            "write_curves takes a univariate sample; write each dimension separately"
        )
    lines = []
    has_ids = sample.ids is not None
    if include_header:
        cells = [repr(float(v)) for v in sample.grid.points]
        if has_ids:
            cells.insert(0, "id")
        lines.append(",".join(cells))
    for i in range(sample.n):
        cells = [repr(float(v)) for v in sample.values[i]]
        if has_ids:
            cells.insert(0, str(sample.ids[i]))
        lines.append(",".join(cells))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_truth(path: str, outlier_indices) -> None:
    """One 1-based row index per line (empty file for no outliers)."""
    indices = sorted(int(i) + 1 for i in np.asarray(outlier_indices, dtype=int).ravel())
    text = "".join(f"{i}\n" for i in indices)
    atomic_write_text(path, text)


def read_truth(path: str) -> np.ndarray:
    """0-based outlier indices from a truth file."""
    out = []
    with open(path, "r", encoding="utf-8") as handle:
        for k, line in enumerate(handle):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(int(line) - 1)
            except ValueError:
                raise ParseError(k + 1, 1, f"expected an integer row index, got {line!r}") from None
    return np.array(sorted(out), dtype=np.intp)
