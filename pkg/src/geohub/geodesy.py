"""Geometric core: ellipsoid and sphere distances, centroids, dispersion.

All lengths are meters internally; miles and kilometers exist only as
accessors on Distance.  Everything here is pure and stateless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Tuple

import numpy as np

from geohub import kernels
from geohub.errors import AntimeridianStraddle, EmptyInput, NonConvergence

METERS_PER_MILE = 1609.344
EARTH_MEAN_RADIUS_M = 6371008.8

# Convergence controls for the iterative inverse geodesic.
VINCENTY_TOL_RAD = 1e-12
VINCENTY_MAX_ITER = 200


@dataclass(frozen=True)
class Ellipsoid:
    """Oblate spheroid: semi-major axis in meters plus flattening."""

    a: float
    f: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError("semi-major axis must be positive")
        if not 0.0 <= self.f < 1.0:
            raise ValueError("flattening must lie in [0, 1)")


WGS84 = Ellipsoid(a=6378137.0, f=1.0 / 298.257223563)


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude pair in degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        # The comparisons also reject NaN coordinates.
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError("latitude out of range: %r" % (self.lat,))
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError("longitude out of range: %r" % (self.lon,))


@dataclass(frozen=True)
class Distance:
    """A nonnegative length, stored in meters.

    used_fallback marks values where the ellipsoid solver failed and the
    sphere distance was substituted on request.
    """

    meters: float
    used_fallback: bool = False

    def __post_init__(self):
        if not self.meters >= 0.0:
            raise ValueError("distance must be nonnegative: %r" % (self.meters,))

    @property
    def kilometers(self) -> float:
        return self.meters / 1000.0

    @property
    def miles(self) -> float:
        return self.meters / METERS_PER_MILE

    @classmethod
    def from_miles(cls, miles: float) -> "Distance":
        return cls(meters=miles * METERS_PER_MILE)

    @classmethod
    def from_kilometers(cls, km: float) -> "Distance":
        return cls(meters=km * 1000.0)


class Metric(Enum):
    """Distance model used for assignment and dispersion."""

    VINCENTY = "vincenty"
    GREAT_CIRCLE = "great_circle"


def _metric_code(metric: Metric) -> int:
    if metric is Metric.GREAT_CIRCLE:
        return kernels.METRIC_SPHERE
    if metric is Metric.VINCENTY:
        return kernels.METRIC_ELLIPSOID
    raise ValueError("unknown metric: %r" % (metric,))


WeightedPoint = Tuple[GeoPoint, float]


def vincenty_distance(p: GeoPoint, q: GeoPoint, ellipsoid: Ellipsoid = WGS84,
                      *, fallback: bool = False) -> Distance:
    """Inverse geodesic distance on the ellipsoid.

    Iterates until the longitude-difference update falls below
    VINCENTY_TOL_RAD or VINCENTY_MAX_ITER passes elapse.  Near-antipodal
    pairs can fail to converge; by default that raises NonConvergence,
    with fallback=True the great-circle value is returned instead and
    the result is marked used_fallback.
    """
    m = kernels.vincenty_one(p.lat, p.lon, q.lat, q.lon,
                             ellipsoid.a, ellipsoid.f,
                             VINCENTY_TOL_RAD, VINCENTY_MAX_ITER)
    if m != m:
        if not fallback:
            raise NonConvergence(
                "no convergence after %d iterations for (%g, %g) -> (%g, %g);"
                " the pair is near-antipodal"
                % (VINCENTY_MAX_ITER, p.lat, p.lon, q.lat, q.lon))
        return Distance(
            meters=kernels.haversine_one(p.lat, p.lon, q.lat, q.lon,
                                         EARTH_MEAN_RADIUS_M),
            used_fallback=True)
    return Distance(meters=m)


def great_circle_distance(p: GeoPoint, q: GeoPoint,
                          radius: float = EARTH_MEAN_RADIUS_M) -> Distance:
    """Haversine arc length on a sphere of mean Earth radius."""
    return Distance(meters=kernels.haversine_one(p.lat, p.lon, q.lat, q.lon,
                                                 radius))


def _split_weighted(points: Iterable[WeightedPoint]):
    """Unzip (GeoPoint, weight) pairs into float64 arrays, validating."""
    lats = []
    lons = []
    ws = []
    for pt, w in points:
        if not w > 0.0:
            raise ValueError("weights must be positive: %r" % (w,))
        lats.append(pt.lat)
        lons.append(pt.lon)
        ws.append(w)
    if not lats:
        raise EmptyInput("at least one weighted point is required")
    return (np.array(lats, dtype=np.float64),
            np.array(lons, dtype=np.float64),
            np.array(ws, dtype=np.float64))


def _fold(values: np.ndarray) -> float:
    """Serial in-order sum, the same fold a one-cluster bincount does.

    Keeping this identical to the per-cluster centroid update means a
    k=1 fit reproduces planar_centroid bit for bit.
    """
    n = values.shape[0]
    return float(np.bincount(np.zeros(n, dtype=np.int64), weights=values,
                             minlength=1)[0])


def planar_centroid(points: Iterable[WeightedPoint]) -> GeoPoint:
    """Weighted arithmetic mean of latitudes and longitudes.

    Latitude and longitude average independently, treating degrees as
    plane coordinates.  Point sets whose longitudes span more than 180
    degrees wrap around the antimeridian, where plane averaging is
    meaningless, so that raises instead of returning garbage.
    """
    lats, lons, ws = _split_weighted(points)
    if float(lons.max()) - float(lons.min()) > 180.0:
        raise AntimeridianStraddle(
            "longitude span exceeds 180 degrees; planar averaging is invalid")
    sum_w = _fold(ws)
    return GeoPoint(lat=_fold(ws * lats) / sum_w,
                    lon=_fold(ws * lons) / sum_w)


def spherical_centroid(points: Iterable[WeightedPoint]) -> GeoPoint:
    """Weighted mean direction of the unit vectors on the sphere.

    Alternative center for sensitivity checks; the planar rule is the
    default everywhere else.
    """
    lats, lons, ws = _split_weighted(points)
    phi = np.radians(lats)
    lam = np.radians(lons)
    cos_phi = np.cos(phi)
    x = cos_phi * np.cos(lam)
    y = cos_phi * np.sin(lam)
    z = np.sin(phi)
    sx = _fold(ws * x)
    sy = _fold(ws * y)
    sz = _fold(ws * z)
    norm = math.sqrt(sx * sx + sy * sy + sz * sz)
    # perfect cancellation never reaches exactly 0.0 in floating point,
    # only a rounding residue, so the guard is relative to total weight
    if norm < 1e-9 * _fold(ws):
        raise ValueError("degenerate point set: mean direction is undefined")
    return GeoPoint(lat=math.degrees(math.atan2(sz, math.hypot(sx, sy))),
                    lon=math.degrees(math.atan2(sy, sx)))


def _distances_to_center(lats, lons, center: GeoPoint, metric: Metric,
                         ellipsoid: Ellipsoid, fallback: bool):
    n_threads = kernels.resolve_threads()
    dists, n_special = kernels.point_distances(
        center.lat, center.lon, lats, lons, _metric_code(metric),
        ellipsoid.a, ellipsoid.f, EARTH_MEAN_RADIUS_M,
        VINCENTY_TOL_RAD, VINCENTY_MAX_ITER, fallback, n_threads)
    if n_special and not fallback:
        raise NonConvergence(
            "%d point(s) failed to converge against center (%g, %g)"
            % (n_special, center.lat, center.lon))
    return dists, n_special


def rms_dispersion(points: Iterable[WeightedPoint], center: GeoPoint,
                   metric: Metric = Metric.VINCENTY,
                   ellipsoid: Ellipsoid = WGS84,
                   *, fallback: bool = False) -> Distance:
    """Root of the weighted mean squared distance to the center.

    With unit weights this is sqrt((1/n) * sum(r_i^2)); a point of
    weight w contributes exactly like w coincident unit points.
    """
    lats, lons, ws = _split_weighted(points)
    dists, n_special = _distances_to_center(lats, lons, center, metric,
                                            ellipsoid, fallback)
    n_threads = kernels.resolve_threads()
    sum_w, _, sum_wd2 = kernels.chunked_weighted_sums(dists, ws, n_threads)
    return Distance(meters=math.sqrt(sum_wd2 / sum_w),
                    used_fallback=n_special > 0)


def mean_distance(points: Iterable[WeightedPoint], center: GeoPoint,
                  metric: Metric = Metric.VINCENTY,
                  ellipsoid: Ellipsoid = WGS84,
                  *, fallback: bool = False) -> Distance:
    """Weighted arithmetic mean distance to the center.

    Companion to rms_dispersion; never exceeds it (power-mean order).
    """
    lats, lons, ws = _split_weighted(points)
    dists, n_special = _distances_to_center(lats, lons, center, metric,
                                            ellipsoid, fallback)
    n_threads = kernels.resolve_threads()
    sum_w, sum_wd, _ = kernels.chunked_weighted_sums(dists, ws, n_threads)
    return Distance(meters=sum_wd / sum_w, used_fallback=n_special > 0)
