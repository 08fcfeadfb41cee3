"""Uniform-grid rasterization of point datasets.

The bounding space is partitioned into a ``2**theta x 2**theta`` grid of
uniform cells. Each cell is identified by a single non-negative integer
obtained by interleaving the bits of its column and row indices (a z-order /
Morton code), so a point dataset reduces to a sorted, duplicate-free array of
cell ids. All downstream machinery (pricing, graph construction, solvers)
operates on these cell-id arrays.

Convention: the column index ``x`` occupies the even bit positions of the
code and the row index ``y`` the odd ones, so ``encode_cell(0, 0) == 0`` and
``encode_cell(1, 0) == 1``.
"""

from dataclasses import dataclass, field
import csv

import numpy as np

MAX_THETA = 31  # 4**31 - 1 still fits an unsigned 64-bit cell id

_M1 = 0x5555555555555555
_M2 = 0x3333333333333333
_M4 = 0x0F0F0F0F0F0F0F0F
_M8 = 0x00FF00FF00FF00FF
_M16 = 0x0000FFFF0000FFFF
_M32 = 0x00000000FFFFFFFF


class GridError(ValueError):
    """Base class for grid-level failures."""


class CellRangeError(GridError):
    """An index or cell id falls outside the grid."""


class RasterizationError(GridError):
    """A point lies outside the grid's bounding space."""

    def __init__(self, dataset_id, point, message):
        super().__init__(message)
        self.dataset_id = dataset_id
        self.point = point


class PointFileError(GridError):
    """A point file could not be parsed; carries the offending line number."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class GridConfig:
    """Geometry of the rasterization grid.

    ``(origin_x, origin_y)`` is the bottom-left corner of the bounding space
    and ``cell_width`` / ``cell_height`` are the cell extents in input
    coordinate units.
    """

    theta: int
    origin_x: float = 0.0
    origin_y: float = 0.0
    cell_width: float = 1.0
    cell_height: float = 1.0

    def __post_init__(self):
        if not 1 <= self.theta <= MAX_THETA:
            raise GridError(f"theta must be in [1, {MAX_THETA}], got {self.theta}")
        if self.cell_width <= 0 or self.cell_height <= 0:
            raise GridError("cell extents must be positive")

    @property
    def side(self) -> int:
        """Cells per grid axis."""
        return 1 << self.theta

    @property
    def n_cells(self) -> int:
        return 1 << (2 * self.theta)

    @classmethod
    def from_envelope(cls, datasets, theta, bounds=None):
        """Fit a grid over ``datasets`` (or explicit ``bounds`` = (x0, y0, x1, y1)).

        Cell extents are the envelope divided by ``2**theta``. A degenerate
        axis (all coordinates equal) gets extent 1.0 so the grid stays valid.
        """
        if bounds is not None:
            x0, y0, x1, y1 = map(float, bounds)
        else:
            pts = [d.points for d in datasets]
            if not pts:
                raise GridError("cannot derive an envelope from zero datasets")
            allp = np.concatenate(pts)
            x0, y0 = (float(v) for v in allp.min(axis=0))
            x1, y1 = (float(v) for v in allp.max(axis=0))
        if x1 < x0 or y1 < y0:
            raise GridError("envelope maximum lies below its minimum")
        side = 1 << theta
        width = (x1 - x0) / side if x1 > x0 else 1.0
        height = (y1 - y0) / side if y1 > y0 else 1.0
        return cls(theta=theta, origin_x=x0, origin_y=y0,
                   cell_width=width, cell_height=height)


@dataclass(eq=False)
class PointDataset:
    """A raw spatial dataset: an id plus a non-empty sequence of (x, y) points."""

    id: str
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise GridError(f"dataset {self.id!r}: points must be a non-empty (n, 2) array")
        object.__setattr__(self, "points", pts)


@dataclass(eq=False)
class CellBasedDataset:
    """A rasterized dataset: strictly ascending cell ids under one grid.

    ``grid`` is optional metadata; when two datasets both carry grids the
    distance machinery refuses to compare them across different grids.
    """

    id: str
    cells: np.ndarray
    grid: GridConfig | None = field(default=None, compare=False)

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int64)
        if cells.ndim != 1 or cells.size == 0:
            raise GridError(f"dataset {self.id!r}: cells must be a non-empty 1-d array")
        if cells[0] < 0:
            raise GridError(f"dataset {self.id!r}: negative cell id")
        if cells.size > 1 and not (np.diff(cells) > 0).all():
            raise GridError(f"dataset {self.id!r}: cell ids must be strictly ascending")
        if self.grid is not None and int(cells[-1]) >= self.grid.n_cells:
            raise CellRangeError(
                f"dataset {self.id!r}: cell id {int(cells[-1])} outside 4**theta")
        object.__setattr__(self, "cells", cells)

    @property
    def coverage(self) -> int:
        return int(self.cells.size)


def _spread_bits(v):
    """Spread the low 32 bits of ``v`` onto even bit positions (vectorized)."""
    v = np.asarray(v, dtype=np.uint64)
    v = (v | (v << np.uint64(16))) & np.uint64(_M16)
    v = (v | (v << np.uint64(8))) & np.uint64(_M8)
    v = (v | (v << np.uint64(4))) & np.uint64(_M4)
    v = (v | (v << np.uint64(2))) & np.uint64(_M2)
    v = (v | (v << np.uint64(1))) & np.uint64(_M1)
    return v


def _compact_bits(v):
    """Inverse of :func:`_spread_bits`: gather the even bits of ``v``."""
    v = np.asarray(v, dtype=np.uint64) & np.uint64(_M1)
    v = (v | (v >> np.uint64(1))) & np.uint64(_M2)
    v = (v | (v >> np.uint64(2))) & np.uint64(_M4)
    v = (v | (v >> np.uint64(4))) & np.uint64(_M8)
    v = (v | (v >> np.uint64(8))) & np.uint64(_M16)
    v = (v | (v >> np.uint64(16))) & np.uint64(_M32)
    return v


def encode_cell(x: int, y: int, theta: int) -> int:
    """Interleave cell indices into a z-order cell id (x on even bits)."""
    side = 1 << theta
    if not 0 <= x < side:
        raise CellRangeError(f"x index {x} outside [0, {side}) at theta={theta}")
    if not 0 <= y < side:
        raise CellRangeError(f"y index {y} outside [0, {side}) at theta={theta}")
    return int(_spread_bits(x) | (_spread_bits(y) << np.uint64(1)))


def decode_cell(cell_id: int, theta: int) -> tuple[int, int]:
    """Invert :func:`encode_cell`; returns the (x, y) cell indices."""
    if not 0 <= cell_id < (1 << (2 * theta)):
        raise CellRangeError(f"cell id {cell_id} outside [0, 4**{theta})")
    c = np.uint64(cell_id)
    return int(_compact_bits(c)), int(_compact_bits(c >> np.uint64(1)))


def encode_cells(xs, ys) -> np.ndarray:
    """Vectorized Morton encode of index arrays; no range checks."""
    return (_spread_bits(xs) | (_spread_bits(ys) << np.uint64(1))).astype(np.int64)


def decode_cells(cell_ids) -> np.ndarray:
    """Vectorized Morton decode to an (n, 2) int64 index array."""
    c = np.asarray(cell_ids, dtype=np.uint64)
    return np.stack([_compact_bits(c), _compact_bits(c >> np.uint64(1))], axis=1).astype(np.int64)


# A point sitting exactly on the envelope's max corner computes a fractional
# index of side*(1 +/- one ulp); anything within this relative tolerance of
# the boundary clamps to the last cell instead of erroring.
_BOUNDARY_RTOL = 1e-9


def rasterize(dataset: PointDataset, grid: GridConfig) -> CellBasedDataset:
    """Map every point of ``dataset`` to its cell and return the sorted id set.

    Points exactly on the upper boundary clamp to the last cell; points
    outside the bounding space raise :class:`RasterizationError`.
    """
    side = grid.side
    fx = (dataset.points[:, 0] - grid.origin_x) / grid.cell_width
    fy = (dataset.points[:, 1] - grid.origin_y) / grid.cell_height
    limit = side * (1.0 + _BOUNDARY_RTOL)
    bad = (fx < 0) | (fy < 0) | (fx > limit) | (fy > limit)
    if bad.any():
        i = int(np.argmax(bad))
        pt = tuple(dataset.points[i])
        raise RasterizationError(
            dataset.id, pt, f"dataset {dataset.id!r}: point {pt} outside the bounding space")
    ix = np.minimum(np.floor(fx).astype(np.int64), side - 1)
    iy = np.minimum(np.floor(fy).astype(np.int64), side - 1)
    cells = np.unique(encode_cells(ix, iy))
    return CellBasedDataset(id=dataset.id, cells=cells, grid=grid)


def coverage_of_union(collection) -> int:
    """Number of distinct cells covered by a collection of cell-based datasets."""
    arrays = [d.cells for d in collection]
    if not arrays:
        return 0
    return int(np.unique(np.concatenate(arrays)).size)


def read_points_file(path, delimiter: str = ",") -> list[PointDataset]:
    """Parse a delimited point file into datasets, in first-appearance order.

    The file must be UTF-8 with a header row naming the ``dataset_id``, ``x``
    and ``y`` columns (any order, extra columns ignored). Malformed rows fail
    with their line number.
    """
    groups: dict[str, list[tuple[float, float]]] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise PointFileError(1, "empty file (header row required)") from None
        names = [h.strip().lower() for h in header]
        try:
            id_col = names.index("dataset_id")
            x_col = names.index("x")
            y_col = names.index("y")
        except ValueError:
            raise PointFileError(
                1, "header must name dataset_id, x and y columns") from None
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) <= max(id_col, x_col, y_col):
                raise PointFileError(line_no, f"expected at least {max(id_col, x_col, y_col) + 1} columns")
            did = row[id_col].strip()
            if not did:
                raise PointFileError(line_no, "empty dataset_id")
            if any(ch.isspace() for ch in did):
                raise PointFileError(line_no, f"dataset_id {did!r} contains whitespace")
            try:
                x = float(row[x_col])
                y = float(row[y_col])
            except ValueError:
                raise PointFileError(line_no, f"bad coordinate in row {row!r}") from None
            groups.setdefault(did, []).append((x, y))
    if not groups:
        raise PointFileError(2, "no data rows")
    return [PointDataset(id=did, points=np.array(pts)) for did, pts in groups.items()]


def write_points_file(path, datasets, delimiter: str = ",") -> None:
    """Write datasets in the ingestion format (header + one point per row)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow(["dataset_id", "x", "y"])
        for d in datasets:
            for x, y in d.points:
                writer.writerow([d.id, repr(float(x)), repr(float(y))])
