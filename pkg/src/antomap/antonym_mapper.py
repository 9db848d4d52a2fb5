"""Antonym-paired occupied/empty maps: quantifier aggregation, contradiction
map, Lukasiewicz integration, and rebound/short-echo correction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .grid import GridSpec, Pose, ScalarGrid, SensorRing, TraceRecord
from .sensor_models import AntonymParams


def mu_some_grid(x: np.ndarray) -> np.ndarray:
    """Vectorized "some" quantifier (equals sensor_models.mu_some pointwise)."""
    return np.clip((x - 1.0) / 2.0, 0.0, 1.0)


def mu_several_grid(x: np.ndarray) -> np.ndarray:
    """Vectorized "several" quantifier."""
    return np.clip((x - 3.0) / 2.0, 0.0, 1.0)


def contradiction_map(occup: ScalarGrid, empty: ScalarGrid) -> ScalarGrid:
    """Pointwise minimum: the largest degree of simultaneous membership."""
    if occup.spec != empty.spec:
        raise ValueError("grids must share a GridSpec")
    return ScalarGrid(occup.spec, np.minimum(occup.values, empty.values), "unit")


def integrated_map(occup: ScalarGrid, empty: ScalarGrid) -> ScalarGrid:
    """Fuse the two maps into a signed grid with contradictions removed.

    Uses the Lukasiewicz t-norm W(x, y) = max(0, x + y - 1) against each
    map's negation: occupied-not-empty = max(0, occup - empty) and
    empty-not-occupied = max(0, empty - occup); the result is +occ* where
    occup > empty, -emp* otherwise (-1 fully empty, +1 fully occupied,
    0 unknown).
    """
    if occup.spec != empty.spec:
        raise ValueError("grids must share a GridSpec")
    o = occup.values
    e = empty.values
    occ_star = np.maximum(0.0, o - e)
    emp_star = np.maximum(0.0, e - o)
    vals = np.where(o > e, occ_star, -emp_star)
    return ScalarGrid(occup.spec, vals, "signed")


@dataclass
class AntonymMaps:
    """Rendered antonym maps: occupied, empty, contradiction, integrated."""

    occup: ScalarGrid
    empty: ScalarGrid
    contra: ScalarGrid
    integ: ScalarGrid


@dataclass(frozen=True)
class CorrectionStats:
    """Cells rewritten by the contradiction-correction pass."""

    short_echo_cells: int
    rebound_cells: int


class AntonymAccumulator:
    """Per-cell evidence sums of the antonym method, prior to quantification.

    ``occ_sum``/``emp_sum`` hold the confidence-weighted perception sums;
    ``near_occ``/``near_emp`` hold the unweighted perceptions seen from
    nearby (sensor-to-cell distance <= near_threshold), which feed the
    rebound/short-echo rules.
    """

    def __init__(self, spec: GridSpec, params: AntonymParams | None = None,
                 near_threshold: float = 150.0):
        self.spec = spec
        self.params = params or AntonymParams()
        self.near_threshold = near_threshold
        shape = spec.shape
        self.occ_sum = np.zeros(shape)
        self.emp_sum = np.zeros(shape)
        self.near_occ = np.zeros(shape)
        self.near_emp = np.zeros(shape)

    def integrate_reading(self, pose: Pose, sensor_index: int, r: float,
                          ring: SensorRing) -> "AntonymAccumulator":
        """Add one reading's perceptions to every cell in its cone."""
        axis = pose.heading + ring.bearing_offset(sensor_index)
        p = self.params
        _kernels.antonym_reading(
            self.occ_sum, self.emp_sum, self.near_occ, self.near_emp,
            self.spec.origin_x, self.spec.origin_y, self.spec.cell_size,
            pose.x, pose.y, axis, ring.aperture,
            float(r), float(r) >= ring.max_range,
            p.delta_r, p.delta_alpha, p.near_mid, p.near_slope,
            p.far_mid, p.far_slope, p.smaller_slope,
            self.near_threshold)
        return self

    def integrate_record(self, record: TraceRecord,
                         ring: SensorRing) -> "AntonymAccumulator":
        for k in range(ring.count):
            self.integrate_reading(record.pose, k, record.ranges[k], ring)
        return self

    def build(self, trace, ring: SensorRing) -> "AntonymAccumulator":
        for record in trace:
            self.integrate_record(record, ring)
        return self

    def render_maps(self) -> AntonymMaps:
        """Quantify the evidence sums and derive the contradiction and
        integrated maps."""
        occup = ScalarGrid(self.spec, mu_some_grid(self.occ_sum), "unit")
        empty = ScalarGrid(self.spec, mu_several_grid(self.emp_sum), "unit")
        return AntonymMaps(occup, empty,
                           contradiction_map(occup, empty),
                           integrated_map(occup, empty))

    def correct_contradictions(self, contra_threshold: float = 0.0) -> CorrectionStats:
        """Second pass over the finished trace: resolve contradictory cells.

        Where a cell is both occupied and empty beyond ``contra_threshold``:
        if from near it looks empty, the occupied evidence is a short echo
        (a false obstacle) and is dropped; if from near it looks occupied,
        the empty evidence is a rebound (a false empty space) and is dropped.
        Ties and cells without near views are left alone. Idempotent.
        """
        contra = np.minimum(mu_some_grid(self.occ_sum),
                            mu_several_grid(self.emp_sum))
        near_o = mu_some_grid(self.near_occ)
        near_e = mu_several_grid(self.near_emp)
        contested = contra > contra_threshold
        short_echo = contested & (near_e > near_o)
        rebound = contested & (near_o > near_e)
        self.occ_sum[short_echo] = 0.0
        self.emp_sum[rebound] = 0.0
        return CorrectionStats(int(short_echo.sum()), int(rebound.sum()))
