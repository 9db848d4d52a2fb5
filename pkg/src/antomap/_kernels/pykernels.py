"""Pure-NumPy per-reading grid update kernels.

Fallback twin of the compiled module ``antomap._kernels._cykernels``; the two
mirror each other operation for operation so results agree to rounding noise.
Each kernel applies one sonar reading in place to the grids it is handed,
touching only cells inside the reading's cone (center distance <= r + delta_r
and |angle to beam axis| <= aperture). ``is_max`` marks sentinel readings,
which feed the empty models but never the occupied ones.
"""

from __future__ import annotations

import math

import numpy as np

DELTA_SUPPORT_RAD = 0.2182
EPS_LIKELIHOOD = 1e-6
LOG_ODDS_MAX = math.log((1.0 - 1e-6) / 1e-6)

_TWO_PI = 2.0 * math.pi


def _window(shape, origin_x, origin_y, cell_size, sx, sy, reach):
    """Index bounds of the grid window intersecting a disc around the sensor."""
    rows, cols = shape
    row_lo = max(0, int(math.floor((sy - reach - origin_y) / cell_size)))
    row_hi = min(rows - 1, int(math.floor((sy + reach - origin_y) / cell_size)))
    col_lo = max(0, int(math.floor((sx - reach - origin_x) / cell_size)))
    col_hi = min(cols - 1, int(math.floor((sx + reach - origin_x) / cell_size)))
    if row_lo > row_hi or col_lo > col_hi:
        return None
    return row_lo, row_hi, col_lo, col_hi


def _geometry(win, origin_x, origin_y, cell_size, sx, sy, axis):
    """Per-cell distance and |angular offset from the beam axis| arrays."""
    row_lo, row_hi, col_lo, col_hi = win
    xs = origin_x + (np.arange(col_lo, col_hi + 1) + 0.5) * cell_size
    ys = origin_y + (np.arange(row_lo, row_hi + 1) + 0.5) * cell_size
    dx = xs[None, :] - sx
    dy = ys[:, None] - sy
    d = np.sqrt(dx * dx + dy * dy)
    a = np.arctan2(dy, dx) - axis
    off = np.abs(a - _TWO_PI * np.floor((a + math.pi) / _TWO_PI))
    # bearing undefined at the sensor position: offset 0 by convention
    off[d == 0.0] = 0.0
    return d, off


def antonym_reading(occ_sum, emp_sum, near_occ, near_emp,
                    origin_x, origin_y, cell_size,
                    sx, sy, axis, aperture, r, is_max,
                    delta_r, delta_alpha,
                    near_mid, near_slope, far_mid, far_slope, smaller_slope,
                    near_threshold):
    """Accumulate one reading into the four antonym evidence grids."""
    reach = r + delta_r
    win = _window(occ_sum.shape, origin_x, origin_y, cell_size, sx, sy, reach)
    if win is None:
        return
    d, off = _geometry(win, origin_x, origin_y, cell_size, sx, sy, axis)
    cone = (d <= reach) & (off <= aperture)
    if not cone.any():
        return
    row_lo, row_hi, col_lo, col_hi = win
    rows = slice(row_lo, row_hi + 1)
    cols = slice(col_lo, col_hi + 1)

    va = off / delta_alpha
    approx_a = np.maximum(0.0, 1.0 - va * va)
    vd = (d - r) / delta_r
    occup = np.maximum(0.0, 1.0 - vd * vd) * approx_a
    empty = (1.0 - 0.5 * (1.0 + np.tanh((d - r) / smaller_slope))) * approx_a

    w_near = 0.5 * (1.0 + math.tanh((near_mid - r) / near_slope))
    w_far = 1.0 - 0.5 * (1.0 + math.tanh((r - far_mid) / far_slope))

    occ_view = occ_sum[rows, cols]
    emp_view = emp_sum[rows, cols]
    if not is_max:
        occ_view[cone] += w_near * occup[cone]
    emp_view[cone] += w_far * empty[cone]

    near = cone & (d <= near_threshold)
    if near.any():
        if not is_max:
            band = near & (np.abs(d - r) <= delta_r)
            nv = near_occ[rows, cols]
            nv[band] += occup[band]
        inside = near & (d < r - delta_r)
        ev = near_emp[rows, cols]
        ev[inside] += empty[inside]


def prob_reading(log_odds, origin_x, origin_y, cell_size,
                 sx, sy, axis, aperture, r_cm, is_max,
                 rho_v, delta_r_m, p_occ, p_emp, as_printed):
    """Bayes-update the log-odds grid with one reading (distances in meters
    inside the likelihood, grid geometry in cm)."""
    reach = r_cm + delta_r_m * 100.0
    win = _window(log_odds.shape, origin_x, origin_y, cell_size, sx, sy, reach)
    if win is None:
        return
    d, off = _geometry(win, origin_x, origin_y, cell_size, sx, sy, axis)
    cone = (d <= reach) & (off <= aperture)
    if not cone.any():
        return
    row_lo, row_hi, col_lo, col_hi = win

    rho = d / 100.0
    r = r_cm / 100.0
    dr = delta_r_m
    half = 0.5 * (1.0 + np.tanh(2.0 * (rho - rho_v)))
    gam = 1.0 + half if as_printed else 1.0 - half
    vt = off / DELTA_SUPPORT_RAD
    lam = gam * np.where(off <= DELTA_SUPPORT_RAD, 1.0 - vt * vt, 0.0)

    if as_printed:
        t2 = (r - rho - dr) / dr
        t3 = (r - rho) / dr
        band = 0.5 if is_max else lam * (p_occ - 0.5) * (1.0 - t3 * t3)
        p1 = np.select(
            [rho < r - 2.0 * dr, rho < r - dr, rho < r + dr],
            [(1.0 - lam) * 0.5 + lam * p_emp,
             (0.5 - p_emp) * (1.0 - lam * t2 * t2),
             band],
            default=0.5)
        p2 = np.where(rho < r - dr, p_emp, 0.5)
        val = p1 + p2 - 0.5
    else:
        t3 = (r - rho) / dr
        band = 0.5 if is_max else 0.5 + lam * (p_occ - 0.5) * (1.0 - t3 * t3)
        t1 = (r - dr - rho) / dr
        plateau = 0.5 + lam * (p_emp - 0.5) * np.minimum(1.0, t1 * t1)
        val = np.select([rho >= r + dr, rho > r - dr], [0.5, band],
                        default=plateau)
    val = np.clip(val, EPS_LIKELIHOOD, 1.0 - EPS_LIKELIHOOD)
    upd = np.log(val / (1.0 - val))

    view = log_odds[row_lo:row_hi + 1, col_lo:col_hi + 1]
    view[cone] = np.clip(view[cone] + upd[cone], -LOG_ODDS_MAX, LOG_ODDS_MAX)


def fuzzy_reading(mu_occ, mu_emp, origin_x, origin_y, cell_size,
                  sx, sy, axis, aperture, r, is_max,
                  delta_r, k_occ, k_emp, rho_v, as_printed):
    """Fold one reading into the occupied/empty fuzzy maps (algebraic sum)."""
    reach = r + delta_r
    win = _window(mu_occ.shape, origin_x, origin_y, cell_size, sx, sy, reach)
    if win is None:
        return
    d, off = _geometry(win, origin_x, origin_y, cell_size, sx, sy, axis)
    cone = (d <= reach) & (off <= aperture)
    if not cone.any():
        return
    row_lo, row_hi, col_lo, col_hi = win
    rows = slice(row_lo, row_hi + 1)
    cols = slice(col_lo, col_hi + 1)

    half = 0.5 * (1.0 + np.tanh(2.0 * (d / 100.0 - rho_v)))
    gam = 1.0 + half if as_printed else 1.0 - half
    vt = off / DELTA_SUPPORT_RAD
    lam = gam * np.where(off <= DELTA_SUPPORT_RAD, 1.0 - vt * vt, 0.0)

    v = (r - d) / delta_r
    if is_max:
        fo = np.zeros_like(d)
    else:
        fo = np.where((d >= r - delta_r) & (d < r + delta_r),
                      k_occ * (1.0 - v * v), 0.0)
    fe = np.select([d < r - delta_r, d < r], [k_emp, k_emp * v * v],
                   default=0.0)
    mo = np.minimum(1.0, lam * fo)
    me = np.minimum(1.0, lam * fe)

    ov = mu_occ[rows, cols]
    a = ov[cone]
    ov[cone] = a + mo[cone] - a * mo[cone]
    ev = mu_emp[rows, cols]
    b = ev[cone]
    ev[cone] = b + me[cone] - b * me[cone]
