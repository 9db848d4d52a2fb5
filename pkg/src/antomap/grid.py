"""World/grid geometry shared by the simulator, the mappers and the evaluator.

All lengths are in centimeters, all angles in radians (counterclockwise from
the +x axis). Grids are row-major with row <-> y and col <-> x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Sentinel for "no echo within range". Readings at the sentinel still feed the
# empty-space models but never the occupied models.
MAX_RANGE_CM = 600.0

_TWO_PI = 2.0 * math.pi


def normalize_angle(a: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    return a - _TWO_PI * math.floor((a + math.pi) / _TWO_PI)


@dataclass(frozen=True)
class Pose:
    """Robot pose: position (cm) and heading (rad, normalized to [-pi, pi))."""

    x: float
    y: float
    heading: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_angle(float(self.heading)))


@dataclass(frozen=True)
class SensorRing:
    """Ring of sonar transducers, evenly spaced around the robot body.

    ``aperture`` is the half-width of the membership cone each reading
    projects onto the grid (the models use |angle offset| <= aperture).
    """

    count: int = 12
    aperture: float = 0.2618    # rad
    max_range: float = MAX_RANGE_CM

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sensor count must be >= 1")
        if self.aperture < 0:
            raise ValueError("aperture must be >= 0")
        if self.max_range <= 0:
            raise ValueError("max_range must be > 0")

    def bearing_offset(self, sensor_index: int) -> float:
        """Bearing of sensor ``sensor_index`` relative to the robot heading."""
        if not 0 <= sensor_index < self.count:
            raise IndexError(f"sensor index {sensor_index} out of range")
        return normalize_angle(sensor_index * _TWO_PI / self.count)

    @property
    def bearing_offsets(self) -> tuple[float, ...]:
        return tuple(self.bearing_offset(k) for k in range(self.count))


@dataclass(frozen=True)
class TraceRecord:
    """One robot pose plus the ranges of a full sensor-ring firing."""

    pose: Pose
    ranges: tuple[float, ...]
    timestamp_index: int = 0

    def __post_init__(self):
        ranges = tuple(float(r) for r in self.ranges)
        if len(ranges) != 12:
            raise ValueError(f"expected 12 ranges, got {len(ranges)}")
        if any(r < 0 for r in ranges):
            raise ValueError("ranges must be non-negative")
        object.__setattr__(self, "ranges", ranges)


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a rectangular grid: origin is the corner of cell (0, 0)."""

    origin_x: float
    origin_y: float
    cell_size: float
    rows: int
    cols: int

    def __post_init__(self):
        if self.cell_size <= 0:
            raise ValueError("cell_size must be > 0")
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be >= 1")

    @classmethod
    def from_bounds(cls, xmin: float, ymin: float, xmax: float, ymax: float,
                    cell_size: float) -> "GridSpec":
        cols = max(1, int(math.ceil((xmax - xmin) / cell_size - 1e-9)))
        rows = max(1, int(math.ceil((ymax - ymin) / cell_size - 1e-9)))
        return cls(xmin, ymin, cell_size, rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def n_cells(self) -> int:
        return self.rows * self.cols

    def cell_center(self, row: int, col: int) -> tuple[float, float]:
        return (self.origin_x + (col + 0.5) * self.cell_size,
                self.origin_y + (row + 0.5) * self.cell_size)

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """(xs of all columns, ys of all rows) as 1-D arrays."""
        xs = self.origin_x + (np.arange(self.cols) + 0.5) * self.cell_size
        ys = self.origin_y + (np.arange(self.rows) + 0.5) * self.cell_size
        return xs, ys


def world_to_cell(x: float, y: float, spec: GridSpec):
    """Cell (row, col) containing world point (x, y), or None if outside.

    Points exactly on an interior edge belong to the higher-index cell.
    """
    col = math.floor((x - spec.origin_x) / spec.cell_size)
    row = math.floor((y - spec.origin_y) / spec.cell_size)
    if 0 <= row < spec.rows and 0 <= col < spec.cols:
        return (int(row), int(col))
    return None


_RANGE_BOUNDS = {
    "unit": (0.0, 1.0),
    "signed": (-1.0, 1.0),
    "ternary": (-1.0, 1.0),
}


@dataclass
class ScalarGrid:
    """Dense grid of per-cell real values with a declared value range."""

    spec: GridSpec
    values: np.ndarray
    range_tag: str = "unit"

    def __post_init__(self):
        if self.range_tag not in _RANGE_BOUNDS:
            raise ValueError(f"unknown range_tag {self.range_tag!r}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.spec.shape:
            raise ValueError(
                f"values shape {values.shape} != grid shape {self.spec.shape}")
        self.values = values

    @classmethod
    def zeros(cls, spec: GridSpec, range_tag: str = "unit") -> "ScalarGrid":
        return cls(spec, np.zeros(spec.shape), range_tag)

    @classmethod
    def full(cls, spec: GridSpec, value: float, range_tag: str = "unit") -> "ScalarGrid":
        return cls(spec, np.full(spec.shape, float(value)), range_tag)

    def copy(self) -> "ScalarGrid":
        return ScalarGrid(self.spec, self.values.copy(), self.range_tag)

    def check_range(self):
        """Raise if any value is outside the declared range."""
        lo, hi = _RANGE_BOUNDS[self.range_tag]
        if self.values.size and (self.values.min() < lo or self.values.max() > hi):
            raise ValueError(f"values outside {self.range_tag} range [{lo}, {hi}]")
        if self.range_tag == "ternary":
            if not np.all(np.isin(self.values, (-1.0, 0.0, 1.0))):
                raise ValueError("ternary grid contains values outside {-1, 0, 1}")


@dataclass(frozen=True)
class BeamGeometry:
    """Sensor-to-cell distance (cm) and |angle between beam axis and cell| (rad)."""

    d: float
    offset: float

    def __post_init__(self):
        if self.d < 0 or self.offset < 0:
            raise ValueError("distance and offset must be >= 0")


def beam_geometry(pose: Pose, sensor_index: int, ring: SensorRing,
                  cx: float, cy: float) -> BeamGeometry:
    """Geometry of one cell center relative to one beam of the ring.

    At zero distance the bearing is undefined; the offset is 0 by convention.
    """
    dx = cx - pose.x
    dy = cy - pose.y
    d = math.hypot(dx, dy)
    if d == 0.0:
        return BeamGeometry(0.0, 0.0)
    axis = pose.heading + ring.bearing_offset(sensor_index)
    offset = abs(normalize_angle(math.atan2(dy, dx) - axis))
    return BeamGeometry(d, offset)


def cells_in_cone(pose: Pose, sensor_index: int, ring: SensorRing, r: float,
                  spec: GridSpec, delta_r: float = 15.0) -> set[tuple[int, int]]:
    """In-bounds cells whose centers lie in the sector of one reading.

    A cell belongs to the cone when its center satisfies d <= r + delta_r and
    offset <= ring.aperture.
    """
    if r < 0:
        raise ValueError("range must be >= 0")
    reach = r + delta_r
    row_lo = max(0, math.floor((pose.y - reach - spec.origin_y) / spec.cell_size))
    row_hi = min(spec.rows - 1, math.floor((pose.y + reach - spec.origin_y) / spec.cell_size))
    col_lo = max(0, math.floor((pose.x - reach - spec.origin_x) / spec.cell_size))
    col_hi = min(spec.cols - 1, math.floor((pose.x + reach - spec.origin_x) / spec.cell_size))
    out = set()
    for row in range(row_lo, row_hi + 1):
        for col in range(col_lo, col_hi + 1):
            cx, cy = spec.cell_center(row, col)
            g = beam_geometry(pose, sensor_index, ring, cx, cy)
            if g.d <= reach and g.offset <= ring.aperture:
                out.add((row, col))
    return out
