"""Sonar occupancy-grid mapping: probabilistic, independent-fuzzy, and
antonym-paired fuzzy maps with contradiction correction, plus a deterministic
sonar simulator and an evaluation harness."""

from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .antonym_mapper import (AntonymAccumulator, AntonymMaps, CorrectionStats,
                             contradiction_map, integrated_map)
from .evaluate import (ConfusionMatrix3, EvalReport, confusion, discretize,
                       evaluate_map, f_measure, mae, precision_recall, rescale,
                       tcr, tcr_sweep)
from .fuzzy_mapper import FuzzyMapSet, algebraic_sum
from .grid import (MAX_RANGE_CM, BeamGeometry, GridSpec, Pose, ScalarGrid,
                   SensorRing, TraceRecord, beam_geometry, cells_in_cone,
                   normalize_angle, world_to_cell)
from .prob_mapper import ProbabilisticMap
from .sensor_models import (AntonymParams, FuzzyParams, ProbParams, delta, f_emp,
                            f_occ, fuzzy_reading_degrees, gamma,
                            likelihood_occupied, mu_approx_a, mu_approx_d,
                            mu_empty_cell, mu_near, mu_not_far, mu_occup_cell,
                            mu_several, mu_smaller, mu_some)
from .simworld import (Environment, SonarNoise, Trajectory, WallSegment,
                       builtin_environment, builtin_trajectory, cast_sonar,
                       generate_trace, generate_trace_tagged, load_environment,
                       reference_map)

__version__ = "0.1.0"
