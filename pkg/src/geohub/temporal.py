"""Year-by-year centroid trends, drift statistics, and cluster stability.

Years are aggregated independently: each year's surviving records are
rolled up to cities, and the year contributes one centroid/dispersion
entry.  Years with no surviving records are simply absent from the
series rather than padded with placeholders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from geohub.clustering import ClusterModel
from geohub.corpus import (GEOCODE_TOL_DEG, PublicationRecord, RegionFilter,
                           dedupe_paper_city)
from geohub.errors import GeocodeConflict, KMismatch, TooFewYears
from geohub.geodesy import (Distance, GeoPoint, Metric, great_circle_distance,
                            planar_centroid, rms_dispersion,
                            vincenty_distance)


class TrendEntry(NamedTuple):
    year: int
    centroid: GeoPoint
    overall_rms: Distance
    total_weight: int


@dataclass(frozen=True)
class TrendSeries:
    """Ascending per-year centroid entries for one region."""

    region: RegionFilter
    entries: Tuple[TrendEntry, ...]

    def __post_init__(self):
        for prev, cur in zip(self.entries, self.entries[1:]):
            if cur.year <= prev.year:
                raise ValueError("entry years must be strictly increasing")
        for e in self.entries:
            if e.total_weight < 1:
                raise ValueError("every entry needs total_weight >= 1")

    @property
    def total_weight(self) -> int:
        return sum(e.total_weight for e in self.entries)


@dataclass(frozen=True)
class DriftReport:
    """Endpoint deltas and per-year least-squares slopes of a series.

    delta_lat is exactly last-entry latitude minus first-entry latitude
    (likewise delta_lon); the slopes are ordinary least squares over
    (year, lat) and (year, lon), which resist single-year noise better
    than the endpoints alone.
    """

    delta_lat: float
    delta_lon: float
    lat_slope: float
    lon_slope: float


def yearly_centroids(records: Iterable[PublicationRecord],
                     region: RegionFilter,
                     years: Optional[Tuple[int, int]] = None,
                     *, metric: Metric = Metric.VINCENTY,
                     fallback: bool = False) -> TrendSeries:
    """One centroid + RMS entry per year with surviving records.

    Records are deduplicated on (paper_id, city_key) and filtered by
    region before the per-year rollup, so an empty region yields an
    empty series.  years is an inclusive (first, last) window; None
    keeps every year present in the input.
    """
    if years is not None and years[0] > years[1]:
        raise ValueError("year window must satisfy first <= last")
    # (year, city) -> [lat, lon, weight]; first-seen geocode wins,
    # later coords must agree within GEOCODE_TOL_DEG.
    table: Dict[Tuple[int, str], List[float]] = {}
    for rec in dedupe_paper_city(records):
        if years is not None and not years[0] <= rec.year <= years[1]:
            continue
        if not region.accepts(rec):
            continue
        key = (rec.year, rec.city_key)
        row = table.get(key)
        if row is None:
            table[key] = [rec.lat, rec.lon, 1.0]
        else:
            if (abs(rec.lat - row[0]) > GEOCODE_TOL_DEG
                    or abs(rec.lon - row[1]) > GEOCODE_TOL_DEG):
                raise GeocodeConflict(
                    "city %r has conflicting geocodes in year %d"
                    % (rec.city_key, rec.year))
            row[2] += 1.0
    per_year: Dict[int, List[Tuple[str, List[float]]]] = {}
    for (year, city_key), row in table.items():
        per_year.setdefault(year, []).append((city_key, row))
    entries = []
    for year in sorted(per_year):
        cities = sorted(per_year[year])
        weighted = [(GeoPoint(lat=row[0], lon=row[1]), row[2])
                    for _, row in cities]
        centroid = planar_centroid(weighted)
        rms = rms_dispersion(weighted, centroid, metric=metric,
                             fallback=fallback)
        entries.append(TrendEntry(
            year=year, centroid=centroid, overall_rms=rms,
            total_weight=int(sum(row[2] for _, row in cities))))
    return TrendSeries(region=region, entries=tuple(entries))


def drift_stats(series: TrendSeries) -> DriftReport:
    """Endpoint movement and OLS slopes; needs at least two years."""
    if len(series.entries) < 2:
        raise TooFewYears(
            "drift needs >= 2 yearly entries, got %d" % len(series.entries))
    ys = [float(e.year) for e in series.entries]
    lats = [e.centroid.lat for e in series.entries]
    lons = [e.centroid.lon for e in series.entries]
    y_mean = sum(ys) / len(ys)
    denom = sum((y - y_mean) ** 2 for y in ys)

    def slope(vals: List[float]) -> float:
        v_mean = sum(vals) / len(vals)
        return sum((y - y_mean) * (v - v_mean)
                   for y, v in zip(ys, vals)) / denom

    return DriftReport(
        delta_lat=lats[-1] - lats[0],
        delta_lon=lons[-1] - lons[0],
        lat_slope=slope(lats),
        lon_slope=slope(lons),
    )


@dataclass(frozen=True)
class StabilityResult:
    """Greedy centroid matching between two equal-k models.

    pairs[i] = (index in model_a, index in model_b); displacements
    align with pairs.  Matching is greedy on ascending pair distance,
    deterministic, and adequate for the small k used here; it is not
    guaranteed optimal.
    """

    pairs: Tuple[Tuple[int, int], ...]
    displacements: Tuple[Distance, ...]
    max_displacement: Distance


def _sym_distance(p: GeoPoint, q: GeoPoint, metric: Metric,
                  fallback: bool) -> Distance:
    # Evaluate with the pair in a fixed order so d(p, q) == d(q, p)
    # bit for bit and stability is exactly symmetric in its arguments.
    if (q.lat, q.lon) < (p.lat, p.lon):
        p, q = q, p
    if metric is Metric.GREAT_CIRCLE:
        return great_circle_distance(p, q)
    return vincenty_distance(p, q, fallback=fallback)


def cluster_stability(model_a: ClusterModel, model_b: ClusterModel,
                      metric: Metric = Metric.VINCENTY,
                      *, fallback: bool = False) -> StabilityResult:
    """Match centroids across two fits and report their displacements."""
    ka, kb = len(model_a.centroids), len(model_b.centroids)
    if ka != kb:
        raise KMismatch("models have k=%d and k=%d" % (ka, kb))
    triples = []
    for i, p in enumerate(model_a.centroids):
        for j, q in enumerate(model_b.centroids):
            d = _sym_distance(p, q, metric, fallback)
            triples.append((d.meters, i, j, d))
    triples.sort(key=lambda t: (t[0], t[1], t[2]))
    taken_a = set()
    taken_b = set()
    matched: List[Tuple[int, int, Distance]] = []
    for _, i, j, d in triples:
        if i in taken_a or j in taken_b:
            continue
        taken_a.add(i)
        taken_b.add(j)
        matched.append((i, j, d))
        if len(matched) == ka:
            break
    matched.sort(key=lambda t: t[0])
    displacements = tuple(d for _, _, d in matched)
    max_d = max(displacements, key=lambda d: d.meters)
    return StabilityResult(
        pairs=tuple((i, j) for i, j, _ in matched),
        displacements=displacements,
        max_displacement=max_d,
    )
