"""Per-reading membership and likelihood functions for the three map builders.

All functions take distances in centimeters except where a parameter struct
says otherwise (the probabilistic confidence works in meters; conversion
happens inside this module). Every membership output is clamped into [0, 1]:
the raw parabola forms go negative outside their support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .grid import BeamGeometry

REPAIRED = "repaired"
AS_PRINTED = "as-printed"
_MODES = (REPAIRED, AS_PRINTED)

CM_PER_M = 100.0

# Half-width of the angular confidence lobe used by the probabilistic and
# plain-fuzzy methods (radians).
DELTA_SUPPORT_RAD = 0.2182

# Likelihoods are clamped into [EPS, 1 - EPS] so Bayes updates stay invertible
# and cells remain recoverable.
EPS_LIKELIHOOD = 1e-6


@dataclass(frozen=True)
class AntonymParams:
    """Parameters of the antonym-paired sensor model (all lengths in cm)."""

    delta_r: float = 15.0
    delta_alpha: float = 0.2618   # rad
    near_mid: float = 200.0
    near_slope: float = 30.0
    far_mid: float = 300.0
    far_slope: float = 30.0
    smaller_slope: float = 50.0

    def __post_init__(self):
        if self.delta_r <= 0 or self.delta_alpha <= 0:
            raise ValueError("delta_r and delta_alpha must be > 0")
        if min(self.near_slope, self.far_slope, self.smaller_slope) <= 0:
            raise ValueError("slopes must be > 0")


@dataclass(frozen=True)
class ProbParams:
    """Parameters of the probabilistic sensor model (lengths in meters)."""

    rho_v: float = 1.2
    delta_r: float = 0.15
    p_occ: float = 0.6
    p_emp: float = 0.4
    formula_mode: str = REPAIRED

    def __post_init__(self):
        if not (0.0 < self.p_emp < 0.5 < self.p_occ < 1.0):
            raise ValueError("need 0 < p_emp < 0.5 < p_occ < 1")
        if self.formula_mode not in _MODES:
            raise ValueError(f"formula_mode must be one of {_MODES}")


@dataclass(frozen=True)
class FuzzyParams:
    """Parameters of the independent fuzzy sensor model (delta_r in cm)."""

    k_occ: float = 0.65
    k_emp: float = 0.45
    delta_r: float = 15.0
    formula_mode: str = REPAIRED

    def __post_init__(self):
        if not (0.0 < self.k_occ <= 1.0 and 0.0 < self.k_emp <= 1.0):
            raise ValueError("need 0 < k_occ <= 1 and 0 < k_emp <= 1")
        if self.formula_mode not in _MODES:
            raise ValueError(f"formula_mode must be one of {_MODES}")


# ---------------------------------------------------------------------------
# Antonym model: distance confidences, local perceptions, quantifiers
# ---------------------------------------------------------------------------

def mu_near(r: float, p: AntonymParams) -> float:
    """Confidence that the reading is short enough to trust for obstacles."""
    return 0.5 * (1.0 + math.tanh((p.near_mid - r) / p.near_slope))


def mu_not_far(r: float, p: AntonymParams) -> float:
    """Confidence that the reading is not too long to trust for empty space."""
    return 1.0 - 0.5 * (1.0 + math.tanh((r - p.far_mid) / p.far_slope))


def mu_some(x: float) -> float:
    """Quantifier "some": a couple of sightings are enough."""
    if x <= 1.0:
        return 0.0
    if x <= 3.0:
        return (x - 1.0) / 2.0
    return 1.0


def mu_several(x: float) -> float:
    """Quantifier "several": demands more repeated evidence than "some"."""
    if x <= 3.0:
        return 0.0
    if x <= 5.0:
        return (x - 3.0) / 2.0
    return 1.0


def mu_approx_d(d: float, r: float, p: AntonymParams) -> float:
    """Degree to which the cell distance d matches the reading r."""
    v = (d - r) / p.delta_r
    return max(0.0, 1.0 - v * v)


def mu_approx_a(offset: float, p: AntonymParams) -> float:
    """Degree to which the cell direction matches the beam axis."""
    v = offset / p.delta_alpha
    return max(0.0, 1.0 - v * v)


def mu_smaller(d: float, r: float, p: AntonymParams) -> float:
    """Degree to which the cell lies short of the reading."""
    return 1.0 - 0.5 * (1.0 + math.tanh((d - r) / p.smaller_slope))


def mu_occup_cell(g: BeamGeometry, r: float, p: AntonymParams) -> float:
    """Per-reading obstacle perception of one cell."""
    return mu_approx_d(g.d, r, p) * mu_approx_a(g.offset, p)


def mu_empty_cell(g: BeamGeometry, r: float, p: AntonymParams) -> float:
    """Per-reading empty-space perception of one cell."""
    return mu_smaller(g.d, r, p) * mu_approx_a(g.offset, p)


# ---------------------------------------------------------------------------
# Shared reading-confidence factors (probabilistic and plain-fuzzy methods)
# ---------------------------------------------------------------------------

def gamma(rho: float, p: ProbParams) -> float:
    """Distance confidence of a reading; rho in meters.

    The printed form grows from 1 to 2 with distance; the repaired form (the
    default) decreases from 1 to 0, matching its role as a confidence.
    """
    half = 0.5 * (1.0 + math.tanh(2.0 * (rho - p.rho_v)))
    if p.formula_mode == AS_PRINTED:
        return 1.0 + half
    return 1.0 - half


def delta(offset: float) -> float:
    """Angular confidence lobe: a parabola dropping to 0 at the lobe edge."""
    t = abs(offset)
    if t > DELTA_SUPPORT_RAD:
        return 0.0
    v = t / DELTA_SUPPORT_RAD
    return 1.0 - v * v


# ---------------------------------------------------------------------------
# Probabilistic sensor model
# ---------------------------------------------------------------------------

def likelihood_occupied(g: BeamGeometry, r_cm: float, p: ProbParams) -> float:
    """p[r | cell occupied] for one reading, clamped into (0, 1).

    The repaired mode (default) recenters everything on the uninformative 0.5
    and is continuous in the cell distance: a plateau of empty evidence, a
    quadratic ramp back to 0.5, an occupied bump around the reading, and 0.5
    beyond. The as-printed mode evaluates the published two-part sum verbatim
    with the double-counted 0.5 baseline removed, so that cells beyond the
    reading stay at 0.5.
    """
    rho = g.d / CM_PER_M
    r = r_cm / CM_PER_M
    lam = gamma(rho, p) * delta(g.offset)
    dr = p.delta_r
    if p.formula_mode == AS_PRINTED:
        if rho < r - 2.0 * dr:
            p1 = (1.0 - lam) * 0.5 + lam * p.p_emp
        elif rho < r - dr:
            t = (r - rho - dr) / dr
            p1 = (0.5 - p.p_emp) * (1.0 - lam * t * t)
        elif rho < r + dr:
            t = (r - rho) / dr
            p1 = lam * (p.p_occ - 0.5) * (1.0 - t * t)
        else:
            p1 = 0.5
        p2 = p.p_emp if rho < r - dr else 0.5
        val = p1 + p2 - 0.5
    else:
        if rho >= r + dr:
            val = 0.5
        elif rho > r - dr:
            t = (r - rho) / dr
            val = 0.5 + lam * (p.p_occ - 0.5) * (1.0 - t * t)
        else:
            t = (r - dr - rho) / dr
            val = 0.5 + lam * (p.p_emp - 0.5) * min(1.0, t * t)
    return min(1.0 - EPS_LIKELIHOOD, max(EPS_LIKELIHOOD, val))


# ---------------------------------------------------------------------------
# Independent fuzzy sensor model
# ---------------------------------------------------------------------------

def f_occ(rho: float, r: float, p: FuzzyParams) -> float:
    """Occupied-map profile: a parabola of height k_occ around the reading."""
    if rho < r - p.delta_r or rho >= r + p.delta_r:
        return 0.0
    v = (r - rho) / p.delta_r
    return p.k_occ * (1.0 - v * v)


def f_emp(rho: float, r: float, p: FuzzyParams) -> float:
    """Empty-map profile: plateau k_emp short of the reading, 0 beyond it."""
    if rho < r - p.delta_r:
        return p.k_emp
    if rho >= r:
        return 0.0
    v = (r - rho) / p.delta_r
    return p.k_emp * v * v


def fuzzy_reading_degrees(g: BeamGeometry, r_cm: float, p: FuzzyParams,
                          prob: ProbParams | None = None) -> tuple[float, float]:
    """(occupied, empty) degrees one reading contributes to one cell.

    Uses the same distance/angle confidence lobes as the probabilistic model;
    ``prob`` supplies rho_v and the gamma mode (defaults shared with p).
    """
    if prob is None:
        prob = ProbParams(formula_mode=p.formula_mode)
    lam = gamma(g.d / CM_PER_M, prob) * delta(g.offset)
    mo = lam * f_occ(g.d, r_cm, p)
    me = lam * f_emp(g.d, r_cm, p)
    return (min(1.0, mo), min(1.0, me))
