"""Probabilistic occupancy grid built by Bayes updates from sonar readings."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .grid import GridSpec, Pose, ScalarGrid, SensorRing, TraceRecord
from .sensor_models import AS_PRINTED, ProbParams

LOG_ODDS_MAX = _kernels.LOG_ODDS_MAX


class ProbabilisticMap:
    """Grid of P[cell occupied], initialized to 0.5.

    Evidence is accumulated internally in log-odds, which is numerically
    equivalent to the probability-form Bayes rule but immune to underflow on
    long traces. Cells saturate at probability 1e-6 / 1 - 1e-6 so they stay
    recoverable.
    """

    def __init__(self, spec: GridSpec, params: ProbParams | None = None):
        self.spec = spec
        self.params = params or ProbParams()
        self.log_odds = np.zeros(spec.shape)

    def probabilities(self) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-self.log_odds))

    @property
    def grid(self) -> ScalarGrid:
        return ScalarGrid(self.spec, self.probabilities(), "unit")

    def update_reading(self, pose: Pose, sensor_index: int, r: float,
                       ring: SensorRing) -> "ProbabilisticMap":
        """Bayes-update every cell in the reading's cone."""
        axis = pose.heading + ring.bearing_offset(sensor_index)
        p = self.params
        _kernels.prob_reading(
            self.log_odds,
            self.spec.origin_x, self.spec.origin_y, self.spec.cell_size,
            pose.x, pose.y, axis, ring.aperture,
            float(r), float(r) >= ring.max_range,
            p.rho_v, p.delta_r, p.p_occ, p.p_emp,
            p.formula_mode == AS_PRINTED)
        return self

    def update(self, record: TraceRecord, ring: SensorRing) -> "ProbabilisticMap":
        """Apply the readings of one record in sensor order 0..11."""
        for k in range(ring.count):
            self.update_reading(record.pose, k, record.ranges[k], ring)
        return self

    def build(self, trace, ring: SensorRing) -> "ProbabilisticMap":
        for record in trace:
            self.update(record, ring)
        return self

    def signed_map(self) -> ScalarGrid:
        """Rescale to [-1, 1]: 2P - 1 (-1 empty, 0 unknown, +1 occupied)."""
        return ScalarGrid(self.spec, 2.0 * self.probabilities() - 1.0, "signed")
