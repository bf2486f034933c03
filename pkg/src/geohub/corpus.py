"""Publication record ingest: parse, dedupe, region-filter, aggregate.

The input is a UTF-8 tab-separated extract with a header row naming at
least the columns paper_id, year, city, admin1, country, lat, lon.
Records stream through the stages one line at a time, so corpora far
larger than memory are fine; only the dedup key set and the per-city
aggregate table are held.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, List, NamedTuple, Optional, Tuple

from geohub.errors import FatalFormat, GeocodeConflict, InvalidBBox
from geohub.geodesy import GeoPoint

REQUIRED_COLUMNS = ("paper_id", "year", "city", "admin1", "country",
                    "lat", "lon")

YEAR_MIN = 1800
YEAR_MAX = 2100

# Two records for one city may disagree by float-formatting jitter, not
# by more than this, else the corpus is inconsistent.
GEOCODE_TOL_DEG = 1e-6

# admin1 codes excluded from the contiguous-US region.
US_EXCLUDED_ADMIN1 = frozenset({"AK", "HI", "PR", "GU", "VI", "AS", "MP",
                                "UM"})
# admin1 codes excluded from mainland China.
CN_EXCLUDED_ADMIN1 = frozenset({"HK", "MO", "TW"})


class PublicationRecord(NamedTuple):
    """One geocoded (paper, city) row."""

    paper_id: str
    year: int
    city_key: str
    admin1: str
    country: str
    lat: float
    lon: float

    @property
    def point(self) -> GeoPoint:
        return GeoPoint(lat=self.lat, lon=self.lon)


@dataclass(frozen=True)
class CityAggregate:
    """A city geocode plus its publication-count weight."""

    city_key: str
    point: GeoPoint
    weight: int

    def __post_init__(self):
        if self.weight < 1:
            raise ValueError("weight must be at least 1: %r" % (self.weight,))


@dataclass
class RejectTally:
    """Collects (line_no, reason) for every malformed input line.

    Line numbers are physical 1-based file lines, header included, so
    they match what an editor shows.
    """

    rejects: List[Tuple[int, str]] = field(default_factory=list)

    def add(self, line_no: int, reason: str) -> None:
        self.rejects.append((line_no, reason))

    @property
    def count(self) -> int:
        return len(self.rejects)

    def write_tsv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("line_no\treason\n")
            for line_no, reason in self.rejects:
                fh.write("%d\t%s\n" % (line_no, reason))


class RegionKind(Enum):
    LOWER48 = "lower48"
    MAINLAND_CHINA = "mainland_china"
    BBOX = "bbox"
    ALL = "all"


@dataclass(frozen=True)
class RegionFilter:
    """Predicate over records: a named study region or a bounding box.

    bbox is (lat_min, lat_max, lon_min, lon_max), inclusive on every
    edge, and only meaningful for kind BBOX.
    """

    kind: RegionKind
    bbox: Optional[Tuple[float, float, float, float]] = None

    def __post_init__(self):
        if self.kind is RegionKind.BBOX:
            if self.bbox is None:
                raise InvalidBBox("BBOX filter needs a bounding box")
            validate_bbox(self.bbox)
        elif self.bbox is not None:
            raise InvalidBBox("bbox is only valid with kind BBOX")

    @classmethod
    def parse(cls, spec: str) -> "RegionFilter":
        """Build a filter from a CLI-style spec string.

        Accepted: "all", "lower48", "mainland-china" (or underscore),
        and "bbox:lat_min,lat_max,lon_min,lon_max".
        """
        s = spec.strip().lower()
        if s == "all":
            return cls(kind=RegionKind.ALL)
        if s == "lower48":
            return cls(kind=RegionKind.LOWER48)
        if s in ("mainland-china", "mainland_china"):
            return cls(kind=RegionKind.MAINLAND_CHINA)
        if s.startswith("bbox:"):
            parts = s[len("bbox:"):].split(",")
            if len(parts) != 4:
                raise InvalidBBox(
                    "bbox spec needs lat_min,lat_max,lon_min,lon_max")
            try:
                nums = tuple(float(p) for p in parts)
            except ValueError:
                raise InvalidBBox("bbox spec has a non-numeric bound: %r"
                                  % (spec,)) from None
            return cls(kind=RegionKind.BBOX, bbox=nums)
        raise InvalidBBox("unknown region spec: %r" % (spec,))

    def accepts(self, record: PublicationRecord) -> bool:
        if self.kind is RegionKind.ALL:
            return True
        if self.kind is RegionKind.LOWER48:
            return (record.country == "US"
                    and record.admin1 not in US_EXCLUDED_ADMIN1)
        if self.kind is RegionKind.MAINLAND_CHINA:
            return (record.country == "CN"
                    and record.admin1 not in CN_EXCLUDED_ADMIN1)
        lat_min, lat_max, lon_min, lon_max = self.bbox
        return (lat_min <= record.lat <= lat_max
                and lon_min <= record.lon <= lon_max)


def validate_bbox(bbox) -> None:
    """Raise InvalidBBox unless bbox is ordered and within coordinate range."""
    if len(bbox) != 4:
        raise InvalidBBox("bbox needs exactly four bounds")
    lat_min, lat_max, lon_min, lon_max = bbox
    if not (-90.0 <= lat_min and lat_max <= 90.0):
        raise InvalidBBox("latitude bounds outside [-90, 90]")
    if not (-180.0 <= lon_min and lon_max <= 180.0):
        raise InvalidBBox("longitude bounds outside [-180, 180]")
    if lat_min > lat_max or lon_min > lon_max:
        raise InvalidBBox("bbox min exceeds max")


def city_key_of(city: str, admin1: str, country: str) -> str:
    return "%s|%s|%s" % (city, admin1, country)


def parse_records(lines: Iterable[str], columns: Optional[dict] = None,
                  *, tally: RejectTally) -> Iterator[PublicationRecord]:
    """Yield one record per well-formed data line.

    columns optionally maps the canonical names in REQUIRED_COLUMNS to
    the header names actually present, so other extracts can be
    consumed without rewriting them.  Malformed lines land in the tally
    with their physical line number; only a missing required header
    column is fatal.

    admin1 and country are uppercased on ingest so region filters and
    city keys never depend on the source's casing.
    """
    mapping = dict(columns) if columns else {}
    it = iter(lines)
    try:
        header_line = next(it)
    except StopIteration:
        raise FatalFormat("input is empty; a header row is required") from None
    header = header_line.rstrip("\r\n").split("\t")
    positions = {name: idx for idx, name in enumerate(header)}
    col_idx = {}
    missing = []
    for canonical in REQUIRED_COLUMNS:
        actual = mapping.get(canonical, canonical)
        if actual not in positions:
            missing.append(actual)
        else:
            col_idx[canonical] = positions[actual]
    if missing:
        raise FatalFormat("header is missing required column(s): %s"
                          % ", ".join(missing))
    need = max(col_idx.values()) + 1
    i_paper = col_idx["paper_id"]
    i_year = col_idx["year"]
    i_city = col_idx["city"]
    i_admin = col_idx["admin1"]
    i_country = col_idx["country"]
    i_lat = col_idx["lat"]
    i_lon = col_idx["lon"]

    line_no = 1
    for line in it:
        line_no += 1
        fields = line.rstrip("\r\n").split("\t")
        if len(fields) < need:
            tally.add(line_no, "too few fields: %d" % len(fields))
            continue
        paper_id = fields[i_paper]
        if not paper_id:
            tally.add(line_no, "empty paper_id")
            continue
        try:
            year = int(fields[i_year])
        except ValueError:
            tally.add(line_no, "unparseable year: %r" % fields[i_year])
            continue
        if not YEAR_MIN <= year <= YEAR_MAX:
            tally.add(line_no, "year out of range: %d" % year)
            continue
        try:
            lat = float(fields[i_lat])
            lon = float(fields[i_lon])
        except ValueError:
            tally.add(line_no, "unparseable coordinate")
            continue
        # Range checks also exclude NaN, which fails every comparison.
        if not -90.0 <= lat <= 90.0:
            tally.add(line_no, "latitude out of range: %r" % fields[i_lat])
            continue
        if not -180.0 <= lon <= 180.0:
            tally.add(line_no, "longitude out of range: %r" % fields[i_lon])
            continue
        admin1 = fields[i_admin].upper()
        country = fields[i_country].upper()
        yield PublicationRecord(
            paper_id=paper_id,
            year=year,
            city_key=city_key_of(fields[i_city], admin1, country),
            admin1=admin1,
            country=country,
            lat=lat,
            lon=lon,
        )


def dedupe_paper_city(
        records: Iterable[PublicationRecord]) -> Iterator[PublicationRecord]:
    """Keep the first record for each (paper_id, city_key) pair.

    Coauthors from one city therefore count their paper once for that
    city.  Idempotent by construction.
    """
    seen = set()
    for record in records:
        key = record.paper_id + "\x1f" + record.city_key
        if key in seen:
            continue
        seen.add(key)
        yield record


def filter_region(records: Iterable[PublicationRecord],
                  region: RegionFilter) -> Iterator[PublicationRecord]:
    """Pass exactly the records the region filter accepts."""
    for record in records:
        if region.accepts(record):
            yield record


def aggregate_cities(
        records: Iterable[PublicationRecord],
        year_range: Optional[Tuple[int, int]] = None) -> List[CityAggregate]:
    """Collapse records to one weighted entry per city.

    weight counts the records that survived upstream stages and fall in
    the inclusive year_range (no range means all years).  Output is
    sorted by city_key, so it does not depend on input order.  Two
    geocodes for one key that differ by more than GEOCODE_TOL_DEG in
    either coordinate raise GeocodeConflict; below that the first one
    seen is kept.
    """
    if year_range is not None:
        y0, y1 = year_range
    table = {}
    for record in records:
        if year_range is not None and not y0 <= record.year <= y1:
            continue
        entry = table.get(record.city_key)
        if entry is None:
            table[record.city_key] = [record.lat, record.lon, 1]
        else:
            if (abs(entry[0] - record.lat) > GEOCODE_TOL_DEG
                    or abs(entry[1] - record.lon) > GEOCODE_TOL_DEG):
                raise GeocodeConflict(
                    "city %r maps to both (%r, %r) and (%r, %r)"
                    % (record.city_key, entry[0], entry[1],
                       record.lat, record.lon))
            entry[2] += 1
    return [CityAggregate(city_key=key,
                          point=GeoPoint(lat=table[key][0], lon=table[key][1]),
                          weight=table[key][2])
            for key in sorted(table)]
