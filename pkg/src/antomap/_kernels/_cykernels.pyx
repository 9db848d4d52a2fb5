# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-reading grid update kernels.

Twin of antomap._kernels.pykernels: same signatures, same arithmetic, cell by
cell instead of vectorized. Kept in lockstep with the fallback; the
equivalence test in tests/test_kernels.py compares both on random readings.
"""

from libc.math cimport M_PI, atan2, fabs, floor, log, sqrt, tanh

cdef double TWO_PI = 2.0 * M_PI
cdef double DELTA_SUPPORT_RAD = 0.2182
cdef double EPS_LIKELIHOOD = 1e-6

LOG_ODDS_MAX = log((1.0 - 1e-6) / 1e-6)
cdef double _LOG_ODDS_MAX = LOG_ODDS_MAX


cdef inline double _wrap_abs(double a) noexcept nogil:
    return fabs(a - TWO_PI * floor((a + M_PI) / TWO_PI))


cdef inline int _row_lo(double sy, double reach, double oy, double cell,
                        int rows) noexcept nogil:
    cdef int v = <int>floor((sy - reach - oy) / cell)
    return 0 if v < 0 else v


cdef inline int _row_hi(double sy, double reach, double oy, double cell,
                        int rows) noexcept nogil:
    cdef int v = <int>floor((sy + reach - oy) / cell)
    return rows - 1 if v > rows - 1 else v


def antonym_reading(double[:, ::1] occ_sum, double[:, ::1] emp_sum,
                    double[:, ::1] near_occ, double[:, ::1] near_emp,
                    double origin_x, double origin_y, double cell_size,
                    double sx, double sy, double axis, double aperture,
                    double r, bint is_max,
                    double delta_r, double delta_alpha,
                    double near_mid, double near_slope,
                    double far_mid, double far_slope, double smaller_slope,
                    double near_threshold):
    """Accumulate one reading into the four antonym evidence grids."""
    cdef int rows = occ_sum.shape[0]
    cdef int cols = occ_sum.shape[1]
    cdef double reach = r + delta_r
    cdef int row_lo = _row_lo(sy, reach, origin_y, cell_size, rows)
    cdef int row_hi = _row_hi(sy, reach, origin_y, cell_size, rows)
    cdef int col_lo = _row_lo(sx, reach, origin_x, cell_size, cols)
    cdef int col_hi = _row_hi(sx, reach, origin_x, cell_size, cols)
    if row_lo > row_hi or col_lo > col_hi:
        return

    cdef double w_near = 0.5 * (1.0 + tanh((near_mid - r) / near_slope))
    cdef double w_far = 1.0 - 0.5 * (1.0 + tanh((r - far_mid) / far_slope))

    cdef int row, col
    cdef double cx, cy, dx, dy, d, off, va, vd, approx_a, occup, empty
    with nogil:
        for row in range(row_lo, row_hi + 1):
            cy = origin_y + (row + 0.5) * cell_size
            dy = cy - sy
            for col in range(col_lo, col_hi + 1):
                cx = origin_x + (col + 0.5) * cell_size
                dx = cx - sx
                d = sqrt(dx * dx + dy * dy)
                if d > reach:
                    continue
                off = 0.0 if d == 0.0 else _wrap_abs(atan2(dy, dx) - axis)
                if off > aperture:
                    continue
                va = off / delta_alpha
                approx_a = 1.0 - va * va
                if approx_a < 0.0:
                    approx_a = 0.0
                vd = (d - r) / delta_r
                occup = 1.0 - vd * vd
                if occup < 0.0:
                    occup = 0.0
                occup = occup * approx_a
                empty = (1.0 - 0.5 * (1.0 + tanh((d - r) / smaller_slope))) * approx_a

                if not is_max:
                    occ_sum[row, col] += w_near * occup
                emp_sum[row, col] += w_far * empty

                if d <= near_threshold:
                    if not is_max and fabs(d - r) <= delta_r:
                        near_occ[row, col] += occup
                    if d < r - delta_r:
                        near_emp[row, col] += empty


cdef inline double _lambda(double d, double off, double rho_v,
                           bint as_printed) noexcept nogil:
    cdef double half = 0.5 * (1.0 + tanh(2.0 * (d / 100.0 - rho_v)))
    cdef double gam = (1.0 + half) if as_printed else (1.0 - half)
    cdef double vt
    if off > DELTA_SUPPORT_RAD:
        return 0.0
    vt = off / DELTA_SUPPORT_RAD
    return gam * (1.0 - vt * vt)


def prob_reading(double[:, ::1] log_odds,
                 double origin_x, double origin_y, double cell_size,
                 double sx, double sy, double axis, double aperture,
                 double r_cm, bint is_max,
                 double rho_v, double delta_r_m, double p_occ, double p_emp,
                 bint as_printed):
    """Bayes-update the log-odds grid with one reading."""
    cdef int rows = log_odds.shape[0]
    cdef int cols = log_odds.shape[1]
    cdef double reach = r_cm + delta_r_m * 100.0
    cdef int row_lo = _row_lo(sy, reach, origin_y, cell_size, rows)
    cdef int row_hi = _row_hi(sy, reach, origin_y, cell_size, rows)
    cdef int col_lo = _row_lo(sx, reach, origin_x, cell_size, cols)
    cdef int col_hi = _row_hi(sx, reach, origin_x, cell_size, cols)
    if row_lo > row_hi or col_lo > col_hi:
        return

    cdef double r = r_cm / 100.0
    cdef double dr = delta_r_m
    cdef int row, col
    cdef double cx, cy, dx, dy, d, off, rho, lam, t, p1, p2, val, lo
    with nogil:
        for row in range(row_lo, row_hi + 1):
            cy = origin_y + (row + 0.5) * cell_size
            dy = cy - sy
            for col in range(col_lo, col_hi + 1):
                cx = origin_x + (col + 0.5) * cell_size
                dx = cx - sx
                d = sqrt(dx * dx + dy * dy)
                if d > reach:
                    continue
                off = 0.0 if d == 0.0 else _wrap_abs(atan2(dy, dx) - axis)
                if off > aperture:
                    continue
                rho = d / 100.0
                lam = _lambda(d, off, rho_v, as_printed)
                if as_printed:
                    if rho < r - 2.0 * dr:
                        p1 = (1.0 - lam) * 0.5 + lam * p_emp
                    elif rho < r - dr:
                        t = (r - rho - dr) / dr
                        p1 = (0.5 - p_emp) * (1.0 - lam * t * t)
                    elif rho < r + dr:
                        if is_max:
                            p1 = 0.5
                        else:
                            t = (r - rho) / dr
                            p1 = lam * (p_occ - 0.5) * (1.0 - t * t)
                    else:
                        p1 = 0.5
                    p2 = p_emp if rho < r - dr else 0.5
                    val = p1 + p2 - 0.5
                else:
                    if rho >= r + dr:
                        val = 0.5
                    elif rho > r - dr:
                        if is_max:
                            val = 0.5
                        else:
                            t = (r - rho) / dr
                            val = 0.5 + lam * (p_occ - 0.5) * (1.0 - t * t)
                    else:
                        t = (r - dr - rho) / dr
                        t = t * t
                        if t > 1.0:
                            t = 1.0
                        val = 0.5 + lam * (p_emp - 0.5) * t
                if val < EPS_LIKELIHOOD:
                    val = EPS_LIKELIHOOD
                elif val > 1.0 - EPS_LIKELIHOOD:
                    val = 1.0 - EPS_LIKELIHOOD
                lo = log_odds[row, col] + log(val / (1.0 - val))
                if lo > _LOG_ODDS_MAX:
                    lo = _LOG_ODDS_MAX
                elif lo < -_LOG_ODDS_MAX:
                    lo = -_LOG_ODDS_MAX
                log_odds[row, col] = lo


def fuzzy_reading(double[:, ::1] mu_occ, double[:, ::1] mu_emp,
                  double origin_x, double origin_y, double cell_size,
                  double sx, double sy, double axis, double aperture,
                  double r, bint is_max,
                  double delta_r, double k_occ, double k_emp, double rho_v,
                  bint as_printed):
    """Fold one reading into the occupied/empty fuzzy maps (algebraic sum)."""
    cdef int rows = mu_occ.shape[0]
    cdef int cols = mu_occ.shape[1]
    cdef double reach = r + delta_r
    cdef int row_lo = _row_lo(sy, reach, origin_y, cell_size, rows)
    cdef int row_hi = _row_hi(sy, reach, origin_y, cell_size, rows)
    cdef int col_lo = _row_lo(sx, reach, origin_x, cell_size, cols)
    cdef int col_hi = _row_hi(sx, reach, origin_x, cell_size, cols)
    if row_lo > row_hi or col_lo > col_hi:
        return

    cdef int row, col
    cdef double cx, cy, dx, dy, d, off, lam, v, fo, fe, mo, me, a
    with nogil:
        for row in range(row_lo, row_hi + 1):
            cy = origin_y + (row + 0.5) * cell_size
            dy = cy - sy
            for col in range(col_lo, col_hi + 1):
                cx = origin_x + (col + 0.5) * cell_size
                dx = cx - sx
                d = sqrt(dx * dx + dy * dy)
                if d > reach:
                    continue
                off = 0.0 if d == 0.0 else _wrap_abs(atan2(dy, dx) - axis)
                if off > aperture:
                    continue
                lam = _lambda(d, off, rho_v, as_printed)
                v = (r - d) / delta_r
                if is_max or d < r - delta_r or d >= r + delta_r:
                    fo = 0.0
                else:
                    fo = k_occ * (1.0 - v * v)
                if d < r - delta_r:
                    fe = k_emp
                elif d < r:
                    fe = k_emp * v * v
                else:
                    fe = 0.0
                mo = lam * fo
                if mo > 1.0:
                    mo = 1.0
                me = lam * fe
                if me > 1.0:
                    me = 1.0
                a = mu_occ[row, col]
                mu_occ[row, col] = a + mo - a * mo
                a = mu_emp[row, col]
                mu_emp[row, col] = a + me - a * me
