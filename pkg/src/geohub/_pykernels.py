"""Distance kernels, pure-Python backend.

This module and the compiled module geohub._ckernels implement the same
functions with the same floating-point operation order, so results are
bit-identical whichever backend is active.  Any arithmetic change here
must be mirrored expression for expression in _ckernels.pyx.

Reductions accumulate fixed-size chunks (CHUNK elements) and merge the
partial sums in chunk index order.  That pins the summation tree, so
sums do not depend on thread count or on which backend ran them.
"""

import math
from math import atan, atan2, cos, fabs, remainder, sin, sqrt, tan

import numpy as np

DEG2RAD = math.pi / 180.0
TWO_PI = 2.0 * math.pi

# Reduction chunk size; shared with the compiled backend.
CHUNK = 4096

METRIC_ELLIPSOID = 0
METRIC_SPHERE = 1


def vincenty_one(lat1, lon1, lat2, lon2, a, f, tol, max_iter):
    """Inverse geodesic distance in meters; NaN when iteration fails.

    Iterates the longitude-difference fixed point until the change is
    below tol radians or max_iter passes elapse.
    """
    if lat1 == lat2 and lon1 == lon2:
        return 0.0
    b = (1.0 - f) * a
    u1 = atan((1.0 - f) * tan(lat1 * DEG2RAD))
    u2 = atan((1.0 - f) * tan(lat2 * DEG2RAD))
    # IEEE remainder keeps the longitude difference in [-pi, pi] even
    # when the inputs sit on opposite sides of the antimeridian.
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
    for _ in range(max_iter):
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
            cos_2sm = 0.0  # both points on the equator
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
        return float("nan")
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


def haversine_one(lat1, lon1, lat2, lon2, radius):
    """Haversine arc length in meters on a sphere of the given radius."""
    phi1 = lat1 * DEG2RAD
    phi2 = lat2 * DEG2RAD
    sp = sin((lat2 - lat1) * DEG2RAD * 0.5)
    sl = sin((lon2 - lon1) * DEG2RAD * 0.5)
    h = sp * sp + cos(phi1) * cos(phi2) * sl * sl
    if h > 1.0:
        h = 1.0  # rounding can push h a hair over 1 near antipodes
    return radius * (2.0 * atan2(sqrt(h), sqrt(1.0 - h)))


def pair_distances(lats1, lons1, lats2, lons2, metric, a, f, radius,
                   tol, max_iter, fallback, n_threads):
    """Elementwise distances for four equal-length coordinate arrays.

    Returns (distances, n_special).  n_special counts pairs the
    ellipsoid solver could not converge; with fallback enabled those
    entries hold the sphere distance, otherwise they hold NaN.
    n_threads is accepted for signature parity and ignored here.
    """
    xs1 = np.ascontiguousarray(lats1, dtype=np.float64).tolist()
    ys1 = np.ascontiguousarray(lons1, dtype=np.float64).tolist()
    xs2 = np.ascontiguousarray(lats2, dtype=np.float64).tolist()
    ys2 = np.ascontiguousarray(lons2, dtype=np.float64).tolist()
    n = len(xs1)
    out = [0.0] * n
    n_special = 0
    if metric == METRIC_SPHERE:
        for i in range(n):
            out[i] = haversine_one(xs1[i], ys1[i], xs2[i], ys2[i], radius)
    else:
        for i in range(n):
            d = vincenty_one(xs1[i], ys1[i], xs2[i], ys2[i],
                             a, f, tol, max_iter)
            if d != d:
                n_special += 1
                if fallback:
                    d = haversine_one(xs1[i], ys1[i], xs2[i], ys2[i], radius)
            out[i] = d
    return np.array(out, dtype=np.float64), n_special


def point_distances(lat, lon, lats, lons, metric, a, f, radius,
                    tol, max_iter, fallback, n_threads):
    """Distances from every (lats[i], lons[i]) to one fixed point.

    The moving point goes first in each pairwise call, matching
    assign_nearest, so one-center results agree with it bitwise.
    Same result contract as pair_distances.
    """
    xs = np.ascontiguousarray(lats, dtype=np.float64).tolist()
    ys = np.ascontiguousarray(lons, dtype=np.float64).tolist()
    n = len(xs)
    out = [0.0] * n
    n_special = 0
    if metric == METRIC_SPHERE:
        for i in range(n):
            out[i] = haversine_one(xs[i], ys[i], lat, lon, radius)
    else:
        for i in range(n):
            d = vincenty_one(xs[i], ys[i], lat, lon, a, f, tol, max_iter)
            if d != d:
                n_special += 1
                if fallback:
                    d = haversine_one(xs[i], ys[i], lat, lon, radius)
            out[i] = d
    return np.array(out, dtype=np.float64), n_special


def assign_nearest(lats, lons, cen_lats, cen_lons, metric, a, f, radius,
                   tol, max_iter, fallback, n_threads):
    """Nearest centroid index and distance for every point.

    Comparison is strict less-than over ascending centroid index, so an
    exact tie always goes to the lowest index.  Returns
    (labels, distances, n_special); a non-convergent pair without
    fallback contributes NaN, which never wins a comparison, so the
    point simply ignores that centroid.
    """
    xs = np.ascontiguousarray(lats, dtype=np.float64).tolist()
    ys = np.ascontiguousarray(lons, dtype=np.float64).tolist()
    cx = np.ascontiguousarray(cen_lats, dtype=np.float64).tolist()
    cy = np.ascontiguousarray(cen_lons, dtype=np.float64).tolist()
    n = len(xs)
    k = len(cx)
    labels = [0] * n
    dists = [0.0] * n
    n_special = 0
    sphere = metric == METRIC_SPHERE
    for i in range(n):
        px = xs[i]
        py = ys[i]
        best = float("inf")
        best_j = 0
        for j in range(k):
            if sphere:
                d = haversine_one(px, py, cx[j], cy[j], radius)
            else:
                d = vincenty_one(px, py, cx[j], cy[j], a, f, tol, max_iter)
                if d != d:
                    n_special += 1
                    if fallback:
                        d = haversine_one(px, py, cx[j], cy[j], radius)
            if d < best:
                best = d
                best_j = j
        labels[i] = best_j
        dists[i] = best
    return (np.array(labels, dtype=np.int64),
            np.array(dists, dtype=np.float64),
            n_special)


def chunked_weighted_sums(values, weights, n_threads):
    """Return (sum_w, sum_wv, sum_wv2) with a pinned summation order.

    Each CHUNK-sized slice is folded left to right, then the per-chunk
    partials are merged in chunk index order.  The compiled backend
    computes the chunks in parallel but merges them identically.
    """
    vs = np.ascontiguousarray(values, dtype=np.float64).tolist()
    ws = np.ascontiguousarray(weights, dtype=np.float64).tolist()
    n = len(vs)
    sum_w = 0.0
    sum_wv = 0.0
    sum_wv2 = 0.0
    for lo in range(0, n, CHUNK):
        hi = min(lo + CHUNK, n)
        pw = 0.0
        pv = 0.0
        pv2 = 0.0
        for i in range(lo, hi):
            w = ws[i]
            v = vs[i]
            pw = pw + w
            pv = pv + w * v
            pv2 = pv2 + w * (v * v)
        sum_w = sum_w + pw
        sum_wv = sum_wv + pv
        sum_wv2 = sum_wv2 + pv2
    return sum_w, sum_wv, sum_wv2
