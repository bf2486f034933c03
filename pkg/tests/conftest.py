"""Shared builders for synthetic corpora and city sets."""

import math

import numpy as np
import pytest

from geohub.corpus import CityAggregate, PublicationRecord, city_key_of
from geohub.geodesy import EARTH_MEAN_RADIUS_M, GeoPoint

HEADER = "paper_id\tyear\tcity\tadmin1\tcountry\tlat\tlon"

# meters per degree of latitude, and of longitude at the equator
M_PER_DEG_LAT = 111132.0
M_PER_DEG_LON_EQ = 111319.49079327358


def record(pid, year, city, lat, lon, admin1="IL", country="US"):
    return PublicationRecord(paper_id=pid, year=year,
                             city_key=city_key_of(city, admin1, country),
                             admin1=admin1, country=country,
                             lat=lat, lon=lon)


def city(key, lat, lon, weight=1):
    return CityAggregate(city_key=key, point=GeoPoint(lat=lat, lon=lon),
                         weight=weight)


def tsv_line(pid, year, cty, admin1, country, lat, lon):
    return "%s\t%s\t%s\t%s\t%s\t%s\t%s" % (pid, year, cty, admin1, country,
                                           lat, lon)


def write_tsv(path, lines, header=HEADER):
    path.write_text(header + "\n" + "".join(l + "\n" for l in lines),
                    encoding="utf-8")
    return path


def random_cities(rng, n, lat_range=(25.0, 49.0), lon_range=(-124.0, -67.0),
                  max_weight=50):
    out = []
    for i in range(n):
        out.append(city("city%04d|XX|US" % i,
                        float(rng.uniform(*lat_range)),
                        float(rng.uniform(*lon_range)),
                        int(rng.integers(1, max_weight + 1))))
    return out


def two_blob_cities(rng, n=100, separation_km=1000.0, spread_km=30.0,
                    lat0=40.0, lon0=-100.0):
    """Two Gaussian city blobs on one parallel, far apart.

    Returns (cities, true_mean_a, true_mean_b) where the true means are
    the weighted planar means of the generated points themselves.
    """
    dlat = spread_km * 1000.0 / M_PER_DEG_LAT
    dlon = spread_km * 1000.0 / (M_PER_DEG_LON_EQ * math.cos(math.radians(lat0)))
    sep = separation_km * 1000.0 / (M_PER_DEG_LON_EQ * math.cos(math.radians(lat0)))
    half = n // 2
    cities = []
    for b, (blat, blon) in enumerate(((lat0, lon0), (lat0, lon0 + sep))):
        for i in range(half if b == 0 else n - half):
            cities.append(city(
                "blob%d_%03d|XX|US" % (b, i),
                blat + float(rng.normal(0.0, dlat)),
                blon + float(rng.normal(0.0, dlon)),
                int(rng.integers(1, 50))))
    def wmean(group):
        sw = sum(c.weight for c in group)
        return GeoPoint(sum(c.weight * c.point.lat for c in group) / sw,
                        sum(c.weight * c.point.lon for c in group) / sw)
    return (cities, wmean(cities[:half]), wmean(cities[half:]))


# eight large-metro anchors, weights shaped like publication counts
METROS = (
    ("boston", 42.36, -71.06, 900),
    ("newyork", 40.71, -74.01, 1000),
    ("chicago", 41.88, -87.63, 500),
    ("houston", 29.76, -95.37, 350),
    ("losangeles", 34.05, -118.24, 700),
    ("seattle", 47.61, -122.33, 300),
    ("atlanta", 33.75, -84.39, 250),
    ("denver", 39.74, -104.99, 200),
)


def metro_cities(rng, per_metro=15, spread_deg=0.8):
    """Lower-48-like corpus: satellite cities around metro anchors."""
    out = []
    for name, lat, lon, w in METROS:
        for i in range(per_metro):
            out.append(city(
                "%s%02d|XX|US" % (name, i),
                lat + float(rng.normal(0.0, spread_deg)),
                lon + float(rng.normal(0.0, spread_deg)),
                max(1, int(rng.poisson(w / per_metro)))))
    return out


def drift_records(n_years=10, per_year=30, lat0=40.0, slope=-0.1,
                  noise=0.05, seed=202):
    """Corpus whose per-year mean latitude falls by `slope` each year."""
    rng = np.random.default_rng(seed)
    recs = []
    pid = 0
    for t in range(n_years):
        year = 2000 + t
        base = lat0 + slope * t
        for i in range(per_year):
            pid += 1
            recs.append(record(
                "p%06d" % pid, year, "y%dc%02d" % (t, i),
                base + float(rng.normal(0.0, noise)),
                -88.0 + float(rng.normal(0.0, noise))))
    return recs


def sphere_direct(point, bearing_deg, distance_m):
    """Great-circle destination point: the construction oracle for
    displacement tests (exact on the sphere the metric uses)."""
    phi1 = math.radians(point.lat)
    lam1 = math.radians(point.lon)
    theta = math.radians(bearing_deg)
    delta = distance_m / EARTH_MEAN_RADIUS_M
    phi2 = math.asin(math.sin(phi1) * math.cos(delta)
                     + math.cos(phi1) * math.sin(delta) * math.cos(theta))
    lam2 = lam1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(phi1),
        math.cos(delta) - math.sin(phi1) * math.sin(phi2))
    return GeoPoint(math.degrees(phi2),
                    math.degrees((lam2 + math.pi) % (2.0 * math.pi) - math.pi))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
