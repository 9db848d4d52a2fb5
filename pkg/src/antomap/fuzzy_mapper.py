"""The prior fuzzy method: independent occupied/empty maps under the
algebraic-sum t-conorm, plus the safe map used in comparisons."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .grid import GridSpec, Pose, ScalarGrid, SensorRing, TraceRecord
from .sensor_models import AS_PRINTED, FuzzyParams


def algebraic_sum(a, b):
    """t-conorm S(a, b) = a + b - a*b (works on scalars and arrays)."""
    return a + b - a * b


class FuzzyMapSet:
    """Pair of independent fuzzy grids for occupied and empty evidence."""

    def __init__(self, spec: GridSpec, params: FuzzyParams | None = None,
                 rho_v: float = 1.2):
        self.spec = spec
        self.params = params or FuzzyParams()
        self.rho_v = rho_v      # meters, distance-confidence midpoint
        self.mu_occ = np.zeros(spec.shape)
        self.mu_emp = np.zeros(spec.shape)

    @property
    def occupied_grid(self) -> ScalarGrid:
        return ScalarGrid(self.spec, self.mu_occ.copy(), "unit")

    @property
    def empty_grid(self) -> ScalarGrid:
        return ScalarGrid(self.spec, self.mu_emp.copy(), "unit")

    def update_reading(self, pose: Pose, sensor_index: int, r: float,
                       ring: SensorRing) -> "FuzzyMapSet":
        axis = pose.heading + ring.bearing_offset(sensor_index)
        p = self.params
        _kernels.fuzzy_reading(
            self.mu_occ, self.mu_emp,
            self.spec.origin_x, self.spec.origin_y, self.spec.cell_size,
            pose.x, pose.y, axis, ring.aperture,
            float(r), float(r) >= ring.max_range,
            p.delta_r, p.k_occ, p.k_emp, self.rho_v,
            p.formula_mode == AS_PRINTED)
        return self

    def update(self, record: TraceRecord, ring: SensorRing) -> "FuzzyMapSet":
        for k in range(ring.count):
            self.update_reading(record.pose, k, record.ranges[k], ring)
        return self

    def build(self, trace, ring: SensorRing) -> "FuzzyMapSet":
        for record in trace:
            self.update(record, ring)
        return self

    def signed_map(self) -> ScalarGrid:
        """Rescale to [-1, 1] as mu_occ - mu_emp (positive = more occupied)."""
        return ScalarGrid(self.spec, self.mu_occ - self.mu_emp, "signed")

    def safe_map(self, alpha: float = 1.0 / 3.0) -> ScalarGrid:
        """Ternary map excluding contradictory and indeterminate cells.

        A cell is occupied when the rescaled value reaches alpha, empty when
        it reaches -alpha, unknown otherwise (so cells where both degrees are
        high, or both low, stay unknown).
        """
        signed = self.mu_occ - self.mu_emp
        vals = np.where(signed >= alpha, 1.0,
                        np.where(signed <= -alpha, -1.0, 0.0))
        return ScalarGrid(self.spec, vals, "ternary")
