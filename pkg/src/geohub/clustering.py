"""K-means over weighted cities with geodesic assignment distance.

Assignment uses the configured geodesic metric; centroid updates use
the planar latitude/longitude mean by default.  That mix means a Lloyd
pass is not guaranteed to lower the geodesic objective every step, so
runs terminate on assignment stability or the iteration cap, and the
dispersion curve enforces its own monotonicity by evaluating several
candidate centroid sets per k and keeping the best (a superset of
centroids can only shrink each city's nearest distance).

Everything is deterministic for a fixed seed: restarts draw from
sequential seeds, ties break toward lower indices, and reductions use
order-pinned sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from geohub import kernels
from geohub.corpus import CityAggregate
from geohub.errors import (EmptyInput, InvalidThreshold, KTooLarge,
                           NonConvergence)
from geohub.geodesy import (EARTH_MEAN_RADIUS_M, VINCENTY_MAX_ITER,
                            VINCENTY_TOL_RAD, WGS84, Distance, Ellipsoid,
                            GeoPoint, Metric)


class CentroidRule(Enum):
    """How a cluster's centroid is recomputed from its member cities."""

    PLANAR_MEAN = "planar_mean"
    SPHERICAL_MEAN = "spherical_mean"


@dataclass(frozen=True)
class ClusterConfig:
    k: int
    restarts: int = 10
    max_iterations: int = 500
    seed: int = 42
    metric: Metric = Metric.VINCENTY
    centroid_rule: CentroidRule = CentroidRule.PLANAR_MEAN
    fallback: bool = False
    ellipsoid: Ellipsoid = WGS84

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class ClusterModel:
    """Result of one fit: centroids plus per-city assignment and spread.

    assignment maps city_key to the index of the city's nearest
    centroid under the configured metric.  per_cluster_weight sums to
    the corpus total.
    """

    centroids: Tuple[GeoPoint, ...]
    assignment: Dict[str, int]
    per_cluster_rms: Tuple[Distance, ...]
    per_cluster_mean: Tuple[Distance, ...]
    per_cluster_weight: Tuple[float, ...]
    overall_rms: Distance
    overall_mean: Distance
    iterations_used: int
    restart_index_of_best: int
    n_fallback_pairs: int = 0

    @property
    def k(self) -> int:
        return len(self.centroids)


@dataclass(frozen=True)
class CurveEntry:
    k: int
    overall_rms: Distance
    overall_mean: Distance


@dataclass(frozen=True)
class DispersionCurve:
    """Best dispersion found for each k from 1 to k_max."""

    entries: Tuple[CurveEntry, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("a dispersion curve needs at least one entry")
        for pos, entry in enumerate(self.entries):
            if entry.k != pos + 1:
                raise ValueError("entry ks must be contiguous from 1")

    @property
    def k_max(self) -> int:
        return len(self.entries)


def _city_arrays(cities: Sequence[CityAggregate]):
    if not cities:
        raise EmptyInput("at least one city is required")
    lats = np.array([c.point.lat for c in cities], dtype=np.float64)
    lons = np.array([c.point.lon for c in cities], dtype=np.float64)
    ws = np.array([float(c.weight) for c in cities], dtype=np.float64)
    return lats, lons, ws


def _metric_code(metric: Metric) -> int:
    return (kernels.METRIC_SPHERE if metric is Metric.GREAT_CIRCLE
            else kernels.METRIC_ELLIPSOID)


def _assign(lats, lons, clats, clons, cfg: ClusterConfig, n_threads: int):
    labels, dists, n_special = kernels.assign_nearest(
        lats, lons, clats, clons, _metric_code(cfg.metric),
        cfg.ellipsoid.a, cfg.ellipsoid.f, EARTH_MEAN_RADIUS_M,
        VINCENTY_TOL_RAD, VINCENTY_MAX_ITER, cfg.fallback, n_threads)
    if n_special and not cfg.fallback:
        raise NonConvergence(
            "%d city-centroid pair(s) failed to converge; pass fallback to"
            " substitute great-circle distances" % n_special)
    return labels, dists, n_special


def _point_dists(lat, lon, lats, lons, cfg: ClusterConfig, n_threads: int):
    dists, n_special = kernels.point_distances(
        float(lat), float(lon), lats, lons, _metric_code(cfg.metric),
        cfg.ellipsoid.a, cfg.ellipsoid.f, EARTH_MEAN_RADIUS_M,
        VINCENTY_TOL_RAD, VINCENTY_MAX_ITER, cfg.fallback, n_threads)
    if n_special and not cfg.fallback:
        raise NonConvergence(
            "%d city pair(s) failed to converge during seeding" % n_special)
    return dists


def _pick_index(rng, masses: np.ndarray, chosen: set) -> int:
    """Sample an index with probability proportional to masses.

    Cumulative-sum inversion keeps the draw deterministic for a given
    rng state.  Zero-mass or already-chosen indices are skipped by a
    deterministic ascending scan if rounding ever lands on one.
    """
    cum = np.cumsum(masses)
    total = float(cum[-1])
    if total > 0.0 and math.isfinite(total):
        idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
        idx = min(idx, masses.shape[0] - 1)
        if masses[idx] > 0.0 and idx not in chosen:
            return idx
    for idx in range(masses.shape[0]):
        if idx not in chosen and masses[idx] > 0.0:
            return idx
    for idx in range(masses.shape[0]):  # all remaining mass is zero
        if idx not in chosen:
            return idx
    raise AssertionError("no index left to choose")


def _seed_kmeanspp(lats, lons, ws, k: int, rng, cfg: ClusterConfig,
                   n_threads: int):
    """Weighted k-means++ start: spread seeds by squared distance."""
    n = lats.shape[0]
    chosen: set = set()
    first = _pick_index(rng, ws, chosen)
    chosen.add(first)
    picks = [first]
    if k > 1:
        d = _point_dists(lats[first], lons[first], lats, lons, cfg, n_threads)
        best_d2 = d * d
        for _ in range(1, k):
            idx = _pick_index(rng, ws * best_d2, chosen)
            chosen.add(idx)
            picks.append(idx)
            d = _point_dists(lats[idx], lons[idx], lats, lons, cfg, n_threads)
            best_d2 = np.minimum(best_d2, d * d)
    return lats[picks].copy(), lons[picks].copy()


def _update_centroids(labels, lats, lons, ws, k: int, rule: CentroidRule):
    sw = np.bincount(labels, weights=ws, minlength=k)
    if rule is CentroidRule.PLANAR_MEAN:
        slat = np.bincount(labels, weights=ws * lats, minlength=k)
        slon = np.bincount(labels, weights=ws * lons, minlength=k)
        return slat / sw, slon / sw
    phi = np.radians(lats)
    lam = np.radians(lons)
    cos_phi = np.cos(phi)
    sx = np.bincount(labels, weights=ws * (cos_phi * np.cos(lam)), minlength=k)
    sy = np.bincount(labels, weights=ws * (cos_phi * np.sin(lam)), minlength=k)
    sz = np.bincount(labels, weights=ws * np.sin(phi), minlength=k)
    clats = np.degrees(np.arctan2(sz, np.hypot(sx, sy)))
    clons = np.degrees(np.arctan2(sy, sx))
    return clats, clons


def _repair_empties(labels, dists, k: int) -> bool:
    """Give each empty cluster the city currently farthest from its
    centroid, as a new singleton.  Mutates labels and dists in place."""
    counts = np.bincount(labels, minlength=k)
    empties = np.flatnonzero(counts == 0)
    for j in empties:
        i_far = int(np.argmax(dists))
        labels[i_far] = j
        dists[i_far] = -1.0  # exclude from the next argmax
    return empties.size > 0


def _lloyd(lats, lons, ws, clats, clons, cfg: ClusterConfig, n_threads: int):
    """Iterate assignment and update until assignments stop changing."""
    k = clats.shape[0]
    prev = None
    iterations = cfg.max_iterations
    for it in range(1, cfg.max_iterations + 1):
        labels, dists, _ = _assign(lats, lons, clats, clons, cfg, n_threads)
        _repair_empties(labels, dists, k)
        if prev is not None and np.array_equal(labels, prev):
            iterations = it
            break
        prev = labels
        clats, clons = _update_centroids(labels, lats, lons, ws, k,
                                         cfg.centroid_rule)
    return clats, clons, iterations


def _objective(lats, lons, ws, clats, clons, cfg: ClusterConfig,
               n_threads: int):
    """Final nearest-assignment pass plus order-pinned weighted sums."""
    labels, dists, n_special = _assign(lats, lons, clats, clons, cfg,
                                       n_threads)
    sum_w, sum_wd, sum_wd2 = kernels.chunked_weighted_sums(dists, ws,
                                                           n_threads)
    return labels, dists, n_special, sum_w, sum_wd, sum_wd2


def kmeans_fit(cities: Sequence[CityAggregate],
               cfg: ClusterConfig) -> ClusterModel:
    """Best of cfg.restarts independent Lloyd runs.

    Run r seeds its generator with cfg.seed + r; the run with the
    smallest weighted RMS wins, earliest run on a tie.  Every city is
    then re-assigned to its nearest returned centroid, so the published
    assignment is locally stable even when a run hit the iteration cap.
    """
    lats, lons, ws = _city_arrays(cities)
    n = lats.shape[0]
    if cfg.k > n:
        raise KTooLarge("k=%d exceeds the %d distinct cities" % (cfg.k, n))
    n_threads = kernels.resolve_threads()
    best = None
    for r in range(cfg.restarts):
        rng = np.random.default_rng(cfg.seed + r)
        clats, clons = _seed_kmeanspp(lats, lons, ws, cfg.k, rng, cfg,
                                      n_threads)
        clats, clons, iterations = _lloyd(lats, lons, ws, clats, clons, cfg,
                                          n_threads)
        labels, dists, n_special, sum_w, sum_wd, sum_wd2 = _objective(
            lats, lons, ws, clats, clons, cfg, n_threads)
        if best is None or sum_wd2 < best[0]:
            best = (sum_wd2, sum_wd, sum_w, r, clats, clons, labels, dists,
                    n_special, iterations)
    sum_wd2, sum_wd, sum_w, r, clats, clons, labels, dists, n_special, \
        iterations = best

    # A capped run can in principle leave a cluster empty even after
    # re-assignment; repair rather than return a zero-weight cluster.
    if _repair_empties(labels, dists, cfg.k):
        for i in np.flatnonzero(dists < 0.0):
            j = int(labels[i])
            d_i, ns = kernels.pair_distances(
                lats[i:i + 1], lons[i:i + 1],
                clats[j:j + 1], clons[j:j + 1],
                _metric_code(cfg.metric), cfg.ellipsoid.a, cfg.ellipsoid.f,
                EARTH_MEAN_RADIUS_M, VINCENTY_TOL_RAD, VINCENTY_MAX_ITER,
                cfg.fallback, 1)
            if ns and not cfg.fallback:
                raise NonConvergence(
                    "distance to a repaired cluster failed to converge")
            dists[i] = d_i[0]
            n_special += ns
        sum_w, sum_wd, sum_wd2 = kernels.chunked_weighted_sums(dists, ws,
                                                               n_threads)

    sw_c = np.bincount(labels, weights=ws, minlength=cfg.k)
    swd_c = np.bincount(labels, weights=ws * dists, minlength=cfg.k)
    swd2_c = np.bincount(labels, weights=ws * (dists * dists), minlength=cfg.k)
    marked = cfg.fallback and n_special > 0
    per_rms = tuple(
        Distance(meters=math.sqrt(swd2_c[j] / sw_c[j]), used_fallback=marked)
        for j in range(cfg.k))
    per_mean = tuple(
        Distance(meters=float(swd_c[j] / sw_c[j]), used_fallback=marked)
        for j in range(cfg.k))
    return ClusterModel(
        centroids=tuple(GeoPoint(lat=float(clats[j]), lon=float(clons[j]))
                        for j in range(cfg.k)),
        assignment={city.city_key: int(labels[i])
                    for i, city in enumerate(cities)},
        per_cluster_rms=per_rms,
        per_cluster_mean=per_mean,
        per_cluster_weight=tuple(float(x) for x in sw_c),
        overall_rms=Distance(meters=math.sqrt(sum_wd2 / sum_w),
                             used_fallback=marked),
        overall_mean=Distance(meters=sum_wd / sum_w, used_fallback=marked),
        iterations_used=iterations,
        restart_index_of_best=r,
        n_fallback_pairs=int(n_special),
    )


def dispersion_curve(cities: Sequence[CityAggregate], k_max: int,
                     cfg: ClusterConfig) -> DispersionCurve:
    """Best dispersion per k, guaranteed non-increasing in k.

    Candidates for each k: the full restarted fit, the best previous
    set extended with the city farthest from its assigned centroid
    (whose objective can only be lower than the previous k's), and a
    Lloyd polish of that extension.  The minimum objective among them
    is reported, so the curve never rises.
    """
    lats, lons, ws = _city_arrays(cities)
    n = lats.shape[0]
    if not 1 <= k_max <= n:
        raise KTooLarge("k_max=%d outside [1, %d]" % (k_max, n))
    n_threads = kernels.resolve_threads()
    entries: List[CurveEntry] = []
    prev_set = None   # (clats, clons) achieving the reported value
    prev_dists = None
    for k in range(1, k_max + 1):
        model = kmeans_fit(cities, replace(cfg, k=k))
        fit_set = (np.array([p.lat for p in model.centroids]),
                   np.array([p.lon for p in model.centroids]))
        candidates = [fit_set]
        if prev_set is not None:
            i_far = int(np.argmax(prev_dists))
            warm = (np.append(prev_set[0], lats[i_far]),
                    np.append(prev_set[1], lons[i_far]))
            candidates.append(warm)
            pol_lat, pol_lon, _ = _lloyd(lats, lons, ws, warm[0].copy(),
                                         warm[1].copy(),
                                         replace(cfg, k=k), n_threads)
            candidates.append((pol_lat, pol_lon))
        best = None
        for cand in candidates:
            _, dists, _, sum_w, sum_wd, sum_wd2 = _objective(
                lats, lons, ws, cand[0], cand[1], cfg, n_threads)
            if best is None or sum_wd2 < best[0]:
                best = (sum_wd2, sum_wd, sum_w, cand, dists)
        sum_wd2, sum_wd, sum_w, chosen, dists = best
        entries.append(CurveEntry(
            k=k,
            overall_rms=Distance(meters=math.sqrt(sum_wd2 / sum_w)),
            overall_mean=Distance(meters=sum_wd / sum_w)))
        prev_set = chosen
        prev_dists = dists
    return DispersionCurve(entries=tuple(entries))


def select_k(curve: DispersionCurve, mode: str, threshold: Distance,
             *, use_mean: bool = False) -> Optional[int]:
    """Pick k from a dispersion curve by one of two threshold rules.

    radius: smallest k whose dispersion is below the threshold.
    delta: smallest k where adding one more cluster improves the
    dispersion by less than the threshold (k_max itself cannot qualify,
    having no successor to compare against).
    Uses the RMS column unless use_mean is set.  Returns None when no k
    qualifies.
    """
    t = threshold.meters
    if not t > 0.0 or not math.isfinite(t):
        raise InvalidThreshold("threshold must be positive and finite")
    values = [(e.overall_mean if use_mean else e.overall_rms).meters
              for e in curve.entries]
    if mode == "radius":
        for pos, value in enumerate(values):
            if value < t:
                return pos + 1
        return None
    if mode == "delta":
        for pos in range(len(values) - 1):
            if values[pos] - values[pos + 1] < t:
                return pos + 1
        return None
    raise ValueError("mode must be 'radius' or 'delta': %r" % (mode,))
