# cython: language_level=3
"""Distance kernels, compiled backend.

Arithmetic twin of geohub._pykernels: every expression below keeps the
operation order of the pure-Python version so both backends produce
bit-identical results.  The build disables floating-point contraction
for the same reason.  Parallel loops only touch independent elements;
reductions go through fixed-size chunks merged in chunk index order.
"""

import numpy as np

from cython.parallel cimport prange
from libc.math cimport (INFINITY, M_PI, NAN, atan, atan2, cos, fabs,
                        remainder, sin, sqrt, tan)

cdef double DEG2RAD = M_PI / 180.0
cdef double TWO_PI = 2.0 * M_PI

cdef Py_ssize_t _CHUNK = 4096

# Python-visible mirrors of the pure module's constants.
CHUNK = 4096
METRIC_ELLIPSOID = 0
METRIC_SPHERE = 1


cdef double _vincenty(double lat1, double lon1, double lat2, double lon2,
                      double a, double f, double tol,
                      int max_iter) noexcept nogil:
    cdef double b, u1, u2, big_l, su1, cu1, su2, cu2, lam
    cdef double sl, cl, t1, t2, sin_sigma, cos_sigma, sigma
    cdef double sin_alpha, cos2_alpha, cos_2sm, cc, lam_prev
    cdef double usq, big_a, big_b, d_sigma
    cdef bint converged
    cdef int it

    if lat1 == lat2 and lon1 == lon2:
        return 0.0
    b = (1.0 - f) * a
    u1 = atan((1.0 - f) * tan(lat1 * DEG2RAD))
    u2 = atan((1.0 - f) * tan(lat2 * DEG2RAD))
    big_l = remainder((lon2 - lon1) * DEG2RAD, TWO_PI)
    su1 = sin(u1)
    cu1 = cos(u1)
    su2 = sin(u2)
    cu2 = cos(u2)
    lam = big_l
    converged = False
    sin_sigma = 0.0
    cos_sigma = 1.0
    sigma = 0.0
    cos2_alpha = 1.0
    cos_2sm = 0.0
    for it in range(max_iter):
        sl = sin(lam)
        cl = cos(lam)
        t1 = cu2 * sl
        t2 = cu1 * su2 - su1 * cu2 * cl
        sin_sigma = sqrt(t1 * t1 + t2 * t2)
        if sin_sigma == 0.0:
            return 0.0
        cos_sigma = su1 * su2 + cu1 * cu2 * cl
        sigma = atan2(sin_sigma, cos_sigma)
        sin_alpha = cu1 * cu2 * sl / sin_sigma
        cos2_alpha = 1.0 - sin_alpha * sin_alpha
        if cos2_alpha == 0.0:
            cos_2sm = 0.0
        else:
            cos_2sm = cos_sigma - 2.0 * su1 * su2 / cos2_alpha
        cc = f / 16.0 * cos2_alpha * (4.0 + f * (4.0 - 3.0 * cos2_alpha))
        lam_prev = lam
        lam = big_l + (1.0 - cc) * f * sin_alpha * (
            sigma + cc * sin_sigma * (
                cos_2sm + cc * cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)
            )
        )
        if fabs(lam - lam_prev) < tol:
            converged = True
            break
    if not converged:
        return NAN
    usq = cos2_alpha * (a * a - b * b) / (b * b)
    big_a = 1.0 + usq / 16384.0 * (
        4096.0 + usq * (-768.0 + usq * (320.0 - 175.0 * usq))
    )
    big_b = usq / 1024.0 * (256.0 + usq * (-128.0 + usq * (74.0 - 47.0 * usq)))
    d_sigma = big_b * sin_sigma * (
        cos_2sm + big_b / 4.0 * (
            cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)
            - big_b / 6.0 * cos_2sm
            * (-3.0 + 4.0 * sin_sigma * sin_sigma)
            * (-3.0 + 4.0 * cos_2sm * cos_2sm)
        )
    )
    return b * big_a * (sigma - d_sigma)


cdef double _haversine(double lat1, double lon1, double lat2, double lon2,
                       double radius) noexcept nogil:
    cdef double phi1, phi2, sp, sl, h
    phi1 = lat1 * DEG2RAD
    phi2 = lat2 * DEG2RAD
    sp = sin((lat2 - lat1) * DEG2RAD * 0.5)
    sl = sin((lon2 - lon1) * DEG2RAD * 0.5)
    h = sp * sp + cos(phi1) * cos(phi2) * sl * sl
    if h > 1.0:
        h = 1.0
    return radius * (2.0 * atan2(sqrt(h), sqrt(1.0 - h)))


def vincenty_one(double lat1, double lon1, double lat2, double lon2,
                 double a, double f, double tol, int max_iter):
    """Inverse geodesic distance in meters; NaN when iteration fails."""
    return _vincenty(lat1, lon1, lat2, lon2, a, f, tol, max_iter)


def haversine_one(double lat1, double lon1, double lat2, double lon2,
                  double radius):
    """Haversine arc length in meters on a sphere of the given radius."""
    return _haversine(lat1, lon1, lat2, lon2, radius)


def pair_distances(lats1, lons1, lats2, lons2, int metric, double a,
                   double f, double radius, double tol, int max_iter,
                   bint fallback, int n_threads):
    """Elementwise distances for four equal-length coordinate arrays."""
    cdef double[::1] xs1 = np.ascontiguousarray(lats1, dtype=np.float64)
    cdef double[::1] ys1 = np.ascontiguousarray(lons1, dtype=np.float64)
    cdef double[::1] xs2 = np.ascontiguousarray(lats2, dtype=np.float64)
    cdef double[::1] ys2 = np.ascontiguousarray(lons2, dtype=np.float64)
    cdef Py_ssize_t n = xs1.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double d
    cdef long long n_special = 0
    if n_threads < 1:
        n_threads = 1
    if metric == METRIC_SPHERE:
        for i in prange(n, nogil=True, num_threads=n_threads,
                        schedule="static"):
            out[i] = _haversine(xs1[i], ys1[i], xs2[i], ys2[i], radius)
    else:
        for i in prange(n, nogil=True, num_threads=n_threads,
                        schedule="static"):
            d = _vincenty(xs1[i], ys1[i], xs2[i], ys2[i],
                          a, f, tol, max_iter)
            if d != d:
                n_special += 1
                if fallback:
                    d = _haversine(xs1[i], ys1[i], xs2[i], ys2[i], radius)
            out[i] = d
    return out_arr, int(n_special)


def point_distances(double lat, double lon, lats, lons, int metric, double a,
                    double f, double radius, double tol, int max_iter,
                    bint fallback, int n_threads):
    """Distances from every (lats[i], lons[i]) to one fixed point.

    Moving point first in each pairwise call, matching assign_nearest.
    """
    cdef double[::1] xs = np.ascontiguousarray(lats, dtype=np.float64)
    cdef double[::1] ys = np.ascontiguousarray(lons, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double d
    cdef long long n_special = 0
    if n_threads < 1:
        n_threads = 1
    if metric == METRIC_SPHERE:
        for i in prange(n, nogil=True, num_threads=n_threads,
                        schedule="static"):
            out[i] = _haversine(xs[i], ys[i], lat, lon, radius)
    else:
        for i in prange(n, nogil=True, num_threads=n_threads,
                        schedule="static"):
            d = _vincenty(xs[i], ys[i], lat, lon, a, f, tol, max_iter)
            if d != d:
                n_special += 1
                if fallback:
                    d = _haversine(xs[i], ys[i], lat, lon, radius)
            out[i] = d
    return out_arr, int(n_special)


def assign_nearest(lats, lons, cen_lats, cen_lons, int metric, double a,
                   double f, double radius, double tol, int max_iter,
                   bint fallback, int n_threads):
    """Nearest centroid index and distance for every point.

    Strict less-than over ascending centroid index; ties go to the
    lowest index.  NaN from a non-convergent pair never wins.
    """
    cdef double[::1] xs = np.ascontiguousarray(lats, dtype=np.float64)
    cdef double[::1] ys = np.ascontiguousarray(lons, dtype=np.float64)
    cdef double[::1] cx = np.ascontiguousarray(cen_lats, dtype=np.float64)
    cdef double[::1] cy = np.ascontiguousarray(cen_lons, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t k = cx.shape[0]
    labels_arr = np.empty(n, dtype=np.int64)
    dists_arr = np.empty(n, dtype=np.float64)
    cdef long long[::1] labels = labels_arr
    cdef double[::1] dists = dists_arr
    cdef Py_ssize_t i, j, best_j
    cdef double d, best, px, py
    cdef long long n_special = 0
    cdef bint sphere = metric == METRIC_SPHERE
    if n_threads < 1:
        n_threads = 1
    for i in prange(n, nogil=True, num_threads=n_threads, schedule="static"):
        px = xs[i]
        py = ys[i]
        best = INFINITY
        best_j = 0
        for j in range(k):
            if sphere:
                d = _haversine(px, py, cx[j], cy[j], radius)
            else:
                d = _vincenty(px, py, cx[j], cy[j], a, f, tol, max_iter)
                if d != d:
                    n_special += 1
                    if fallback:
                        d = _haversine(px, py, cx[j], cy[j], radius)
            if d < best:
                best = d
                best_j = j
        labels[i] = best_j
        dists[i] = best
    return labels_arr, dists_arr, int(n_special)


def chunked_weighted_sums(values, weights, int n_threads):
    """Return (sum_w, sum_wv, sum_wv2) with a pinned summation order.

    Chunks run in parallel; each chunk folds left to right and the
    partials merge serially in chunk index order, exactly like the
    pure-Python backend.
    """
    cdef double[::1] vs = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] ws = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = vs.shape[0]
    cdef Py_ssize_t n_chunks = (n + _CHUNK - 1) // _CHUNK
    if n_chunks == 0:
        return 0.0, 0.0, 0.0
    pw_arr = np.zeros(n_chunks, dtype=np.float64)
    pv_arr = np.zeros(n_chunks, dtype=np.float64)
    pv2_arr = np.zeros(n_chunks, dtype=np.float64)
    cdef double[::1] pws = pw_arr
    cdef double[::1] pvs = pv_arr
    cdef double[::1] pv2s = pv2_arr
    cdef Py_ssize_t c, i, lo, hi
    cdef double pw, pv, pv2, w, v
    if n_threads < 1:
        n_threads = 1
    for c in prange(n_chunks, nogil=True, num_threads=n_threads,
                    schedule="static"):
        lo = c * _CHUNK
        hi = lo + _CHUNK
        if hi > n:
            hi = n
        pw = 0.0
        pv = 0.0
        pv2 = 0.0
        for i in range(lo, hi):
            w = ws[i]
            v = vs[i]
            pw = pw + w
            pv = pv + w * v
            pv2 = pv2 + w * (v * v)
        pws[c] = pw
        pvs[c] = pv
        pv2s[c] = pv2
    cdef double sum_w = 0.0
    cdef double sum_wv = 0.0
    cdef double sum_wv2 = 0.0
    for c in range(n_chunks):
        sum_w = sum_w + pws[c]
        sum_wv = sum_wv + pvs[c]
        sum_wv2 = sum_wv2 + pv2s[c]
    return sum_w, sum_wv, sum_wv2
