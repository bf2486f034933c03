"""Weighted density grids over a bounding box, plus log-scale display.

Binning is equirectangular: degree-linear in both axes, no area
correction.  Row 0 is the northernmost row.  A point exactly on an
interior cell edge goes to the south (rows) or west (columns) cell;
the bbox boundary itself is inclusive.  Cities outside the bbox are
not binned, their weight lands in a reported overflow total, so grid
sum plus overflow always equals the input weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Optional, Sequence, Tuple

import numpy as np

from geohub.corpus import CityAggregate, validate_bbox
from geohub.errors import InvalidBBox, InvalidGrid

BBox = Tuple[float, float, float, float]  # lat_min, lat_max, lon_min, lon_max


@dataclass(frozen=True)
class DensityGrid:
    bbox: BBox
    n_rows: int
    n_cols: int
    cells: np.ndarray = field(repr=False)  # (n_rows, n_cols) int64, row 0 north
    overflow: int = 0

    def __post_init__(self):
        if self.cells.shape != (self.n_rows, self.n_cols):
            raise ValueError("cells shape does not match n_rows x n_cols")
        self.cells.setflags(write=False)

    @property
    def total_weight(self) -> int:
        return int(self.cells.sum()) + self.overflow

    @property
    def cell_height_deg(self) -> float:
        return (self.bbox[1] - self.bbox[0]) / self.n_rows

    @property
    def cell_width_deg(self) -> float:
        return (self.bbox[3] - self.bbox[2]) / self.n_cols


def density_grid(cities: Sequence[CityAggregate], bbox: BBox,
                 n_rows: int = 200, n_cols: int = 400) -> DensityGrid:
    """Accrue each city's whole weight to the one cell holding it."""
    if n_rows < 1 or n_cols < 1:
        raise InvalidGrid("grid needs n_rows >= 1 and n_cols >= 1")
    validate_bbox(bbox)
    lat_min, lat_max, lon_min, lon_max = bbox
    if lat_min == lat_max or lon_min == lon_max:
        raise InvalidBBox("bbox spans zero degrees in one axis")
    cells = np.zeros((n_rows, n_cols), dtype=np.int64)
    if not cities:
        return DensityGrid(bbox=bbox, n_rows=n_rows, n_cols=n_cols,
                           cells=cells, overflow=0)
    lats = np.array([c.point.lat for c in cities], dtype=np.float64)
    lons = np.array([c.point.lon for c in cities], dtype=np.float64)
    ws = np.array([c.weight for c in cities], dtype=np.int64)
    inside = ((lats >= lat_min) & (lats <= lat_max)
              & (lons >= lon_min) & (lons <= lon_max))
    overflow = int(ws[~inside].sum())
    lats, lons, ws = lats[inside], lons[inside], ws[inside]
    h = (lat_max - lat_min) / n_rows
    w = (lon_max - lon_min) / n_cols
    rows = np.floor((lat_max - lats) / h).astype(np.int64)
    cols = (np.ceil((lons - lon_min) / w) - 1.0).astype(np.int64)
    np.clip(rows, 0, n_rows - 1, out=rows)
    np.clip(cols, 0, n_cols - 1, out=cols)
    flat = rows * n_cols + cols
    # weights stay exact in float64: they are integers far below 2**53
    binned = np.bincount(flat, weights=ws.astype(np.float64),
                         minlength=n_rows * n_cols)
    cells = binned.astype(np.int64).reshape(n_rows, n_cols)
    return DensityGrid(bbox=bbox, n_rows=n_rows, n_cols=n_cols,
                       cells=cells, overflow=overflow)


def log_display(grid: DensityGrid) -> np.ndarray:
    """log10(1 + count) per cell; zeros stay exactly zero."""
    return np.log10(1.0 + grid.cells.astype(np.float64))


def _format_value(value) -> str:
    if float(value) == int(value):
        return "%d" % int(value)
    return repr(float(value))


def write_ascii_grid(grid: DensityGrid, fh: IO[str],
                     values: Optional[np.ndarray] = None) -> None:
    """ESRI ASCII grid, rows north to south.

    The format carries a single cellsize, so the longitude spacing is
    written; latitude spacing can differ for non-square cells and is
    recoverable from nrows and the corner coordinates.
    """
    data = grid.cells if values is None else values
    fh.write("ncols %d\n" % grid.n_cols)
    fh.write("nrows %d\n" % grid.n_rows)
    fh.write("xllcorner %s\n" % _format_value(grid.bbox[2]))
    fh.write("yllcorner %s\n" % _format_value(grid.bbox[0]))
    fh.write("cellsize %s\n" % _format_value(grid.cell_width_deg))
    fh.write("NODATA_value -1\n")
    for r in range(grid.n_rows):
        fh.write(" ".join(_format_value(v) for v in data[r]))
        fh.write("\n")


def write_csv_matrix(grid: DensityGrid, fh: IO[str],
                     values: Optional[np.ndarray] = None) -> None:
    """Comma-separated matrix, one line per row, north to south."""
    data = grid.cells if values is None else values
    for r in range(grid.n_rows):
        fh.write(",".join(_format_value(v) for v in data[r]))
        fh.write("\n")
