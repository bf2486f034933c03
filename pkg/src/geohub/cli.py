"""Command-line front end: publication TSV in, analysis files out.

Exit codes: 0 success, 1 usage error, 2 data or I/O error.  Every run
writes a reject tally next to the primary output, and every CSV ends
with a comment line recording seed, version, and record/reject counts,
so identical inputs and flags reproduce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import IO, List, Optional, Tuple

from geohub import __version__
from geohub.clustering import (ClusterConfig, ClusterModel, dispersion_curve,
                               kmeans_fit, select_k)
from geohub.corpus import (CityAggregate, RegionFilter, RejectTally,
                           aggregate_cities, dedupe_paper_city, filter_region,
                           parse_records)
from geohub.errors import EmptyInput, GeoHubError
from geohub.geodesy import (Distance, Metric, mean_distance, planar_centroid,
                            rms_dispersion)
from geohub.raster import (density_grid, log_display, write_ascii_grid,
                           write_csv_matrix)
from geohub.temporal import drift_stats, yearly_centroids

_METERS_PER_UNIT = {"miles": 1609.344, "km": 1000.0}


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; 2 is reserved for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _years_arg(text: str) -> Tuple[int, int]:
    first, _, last = text.partition(":")
    try:
        years = (int(first), int(last))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected FIRST:LAST, got %r" % text)
    if years[0] > years[1]:
        raise argparse.ArgumentTypeError("years must satisfy first <= last")
    return years


def _region_arg(text: str) -> RegionFilter:
    try:
        return RegionFilter.parse(text)
    except GeoHubError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _bbox_arg(text: str) -> Tuple[float, float, float, float]:
    parts = text.split(",")
    try:
        bounds = tuple(float(p) for p in parts)
    except ValueError:
        bounds = ()
    if len(bounds) != 4:
        raise argparse.ArgumentTypeError(
            "expected lat_min,lat_max,lon_min,lon_max, got %r" % text)
    return bounds


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got %r" % text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a number, got %r" % text)
    if not value > 0.0 or value != value or value == float("inf"):
        raise argparse.ArgumentTypeError("expected a positive finite number")
    return value


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--input", required=True,
                     help="TSV of publication records")
    sub.add_argument("--out", required=True,
                     help="primary output file; companion files share its stem")
    sub.add_argument("--region", type=_region_arg,
                     default=RegionFilter.parse("all"),
                     help="all, lower48, mainland-china, or bbox:LAT_MIN,LAT_MAX,LON_MIN,LON_MAX")
    sub.add_argument("--years", type=_years_arg, default=None,
                     metavar="FIRST:LAST", help="inclusive year window")
    sub.add_argument("--units", choices=("miles", "km"), default="miles")
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--metric",
                     choices=tuple(m.value for m in Metric),
                     default=Metric.VINCENTY.value)
    sub.add_argument("--fallback", action="store_true",
                     help="substitute great-circle distance where the "
                          "geodesic iteration fails")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="geohub",
        description="Geographic centroids, clusters, trends, and density "
                    "grids over geocoded publication records.")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="{centroid,cluster,elbow,trend,density}")

    p = sub.add_parser("centroid", help="overall centroid and dispersion")
    _add_common(p)

    p = sub.add_parser("cluster", help="k-means regional clusters")
    _add_common(p)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--restarts", type=_positive_int, default=10)
    p.add_argument("--max-iterations", type=_positive_int, default=500)

    p = sub.add_parser("elbow", help="dispersion curve and k selection")
    _add_common(p)
    p.add_argument("--k-max", type=_positive_int, default=10)
    p.add_argument("--mode", choices=("radius", "delta"), default="radius")
    p.add_argument("--threshold", type=_positive_float, required=True,
                   help="selection threshold, in --units")
    p.add_argument("--measure", choices=("rms", "mean"), default="rms")
    p.add_argument("--restarts", type=_positive_int, default=10)
    p.add_argument("--max-iterations", type=_positive_int, default=500)

    p = sub.add_parser("trend", help="per-year centroid trail and drift")
    _add_common(p)

    p = sub.add_parser("density", help="weighted density grids")
    _add_common(p)
    p.add_argument("--bbox", type=_bbox_arg, default=None,
                   metavar="LAT_MIN,LAT_MAX,LON_MIN,LON_MAX",
                   help="grid bounds; data bounds when omitted")
    p.add_argument("--rows", type=_positive_int, default=200)
    p.add_argument("--cols", type=_positive_int, default=400)
    p.add_argument("--format", choices=("asciigrid", "csv"),
                   default="asciigrid")
    return parser


def _f(x) -> str:
    return repr(float(x))


def _rejects_path(out: str) -> str:
    return os.path.splitext(out)[0] + ".rejects.tsv"


def _meta(args, n_records: int, tally: RejectTally, extra: str = "") -> str:
    return "# seed=%d version=%s records=%d rejects=%d%s\n" % (
        args.seed, __version__, n_records, tally.count, extra)


def _open_out(path: str) -> IO[str]:
    return open(path, "w", encoding="utf-8", newline="")


def _load_cities(args) -> Tuple[List[CityAggregate], RejectTally, int]:
    """Parse, dedupe, filter, aggregate; the reject tally is written
    even when a later stage raises."""
    tally = RejectTally()
    with open(args.input, "r", encoding="utf-8") as fh:
        try:
            records = parse_records(fh, tally=tally)
            records = dedupe_paper_city(records)
            records = filter_region(records, args.region)
            cities = aggregate_cities(records, year_range=args.years)
        finally:
            tally.write_tsv(_rejects_path(args.out))
    n_records = sum(c.weight for c in cities)
    return cities, tally, n_records


def _weighted(cities: List[CityAggregate]):
    return [(c.point, float(c.weight)) for c in cities]


def _cluster_config(args, k: int) -> ClusterConfig:
    return ClusterConfig(k=k,
                         restarts=args.restarts,
                         max_iterations=args.max_iterations,
                         seed=args.seed,
                         metric=Metric(args.metric),
                         fallback=args.fallback)


def _write_centroid_csv(fh: IO[str], rows, units: str, meta: str) -> None:
    fh.write("k,cluster_id,lat,lon,weight,rms,mean,units\n")
    for k, cid, lat, lon, weight, rms, mean in rows:
        fh.write("%d,%d,%s,%s,%d,%s,%s,%s\n"
                 % (k, cid, _f(lat), _f(lon), weight, _f(rms), _f(mean),
                    units))
    fh.write(meta)


def _cmd_centroid(args) -> int:
    cities, tally, n_records = _load_cities(args)
    metric = Metric(args.metric)
    weighted = _weighted(cities)
    center = planar_centroid(weighted)
    rms = rms_dispersion(weighted, center, metric=metric,
                         fallback=args.fallback)
    mean = mean_distance(weighted, center, metric=metric,
                         fallback=args.fallback)
    div = _METERS_PER_UNIT[args.units]
    with _open_out(args.out) as fh:
        _write_centroid_csv(
            fh,
            [(1, 0, center.lat, center.lon, n_records,
              rms.meters / div, mean.meters / div)],
            args.units, _meta(args, n_records, tally))
    return 0


def _geojson_model(model: ClusterModel, cities, args, n_records, tally,
                   div: float) -> dict:
    features = []
    for j, p in enumerate(model.centroids):
        features.append({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [p.lon, p.lat]},
            "properties": {
                "kind": "centroid",
                "cluster_id": j,
                "weight": int(model.per_cluster_weight[j]),
                "rms": model.per_cluster_rms[j].meters / div,
                "mean": model.per_cluster_mean[j].meters / div,
                "units": args.units,
            },
        })
    for c in cities:
        features.append({
            "type": "Feature",
            "geometry": {"type": "Point",
                         "coordinates": [c.point.lon, c.point.lat]},
            "properties": {
                "kind": "city",
                "city_key": c.city_key,
                "weight": c.weight,
                "cluster_id": model.assignment[c.city_key],
            },
        })
    return {
        "type": "FeatureCollection",
        "metadata": {
            "seed": args.seed,
            "version": __version__,
            "records": n_records,
            "rejects": tally.count,
            "k": model.k,
            "overall_rms": model.overall_rms.meters / div,
            "overall_mean": model.overall_mean.meters / div,
            "units": args.units,
            "iterations_used": model.iterations_used,
            "restart_index_of_best": model.restart_index_of_best,
        },
        "features": features,
    }


def _cmd_cluster(args) -> int:
    cities, tally, n_records = _load_cities(args)
    model = kmeans_fit(cities, _cluster_config(args, args.k))
    div = _METERS_PER_UNIT[args.units]
    rows = [(model.k, j, model.centroids[j].lat, model.centroids[j].lon,
             int(model.per_cluster_weight[j]),
             model.per_cluster_rms[j].meters / div,
             model.per_cluster_mean[j].meters / div)
            for j in range(model.k)]
    with _open_out(args.out) as fh:
        _write_centroid_csv(fh, rows, args.units,
                            _meta(args, n_records, tally))
    geo = _geojson_model(model, cities, args, n_records, tally, div)
    with _open_out(os.path.splitext(args.out)[0] + ".geojson") as fh:
        json.dump(geo, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
    return 0


def _cmd_elbow(args) -> int:
    cities, tally, n_records = _load_cities(args)
    div = _METERS_PER_UNIT[args.units]
    curve = dispersion_curve(cities, args.k_max, _cluster_config(args, 1))
    selected = select_k(curve, args.mode,
                        Distance(meters=args.threshold * div),
                        use_mean=(args.measure == "mean"))
    with _open_out(args.out) as fh:
        fh.write("k,rms,mean,units\n")
        for e in curve.entries:
            fh.write("%d,%s,%s,%s\n" % (e.k, _f(e.overall_rms.meters / div),
                                        _f(e.overall_mean.meters / div),
                                        args.units))
        fh.write("selected_k,%s,,\n"
                 % ("" if selected is None else selected))
        fh.write(_meta(args, n_records, tally))
    return 0


def _cmd_trend(args) -> int:
    tally = RejectTally()
    metric = Metric(args.metric)
    with open(args.input, "r", encoding="utf-8") as fh:
        try:
            series = yearly_centroids(parse_records(fh, tally=tally),
                                      args.region, args.years,
                                      metric=metric, fallback=args.fallback)
        finally:
            tally.write_tsv(_rejects_path(args.out))
    n_records = series.total_weight
    div = _METERS_PER_UNIT[args.units]
    with _open_out(args.out) as fh:
        fh.write("year,lat,lon,rms,weight,units\n")
        for e in series.entries:
            fh.write("%d,%s,%s,%s,%d,%s\n"
                     % (e.year, _f(e.centroid.lat), _f(e.centroid.lon),
                        _f(e.overall_rms.meters / div), e.total_weight,
                        args.units))
        fh.write(_meta(args, n_records, tally))
    if len(series.entries) < 2:
        sys.stderr.write("geohub: note: %d year(s) in series, drift needs 2;"
                         " drift file not written\n" % len(series.entries))
        return 0
    drift = drift_stats(series)
    with _open_out(os.path.splitext(args.out)[0] + "_drift.csv") as fh:
        fh.write("delta_lat,delta_lon,lat_slope,lon_slope\n")
        fh.write("%s,%s,%s,%s\n" % (_f(drift.delta_lat), _f(drift.delta_lon),
                                    _f(drift.lat_slope), _f(drift.lon_slope)))
        fh.write(_meta(args, n_records, tally))
    return 0


def _data_bounds(cities) -> Tuple[float, float, float, float]:
    lats = [c.point.lat for c in cities]
    lons = [c.point.lon for c in cities]
    return (min(lats), max(lats), min(lons), max(lons))


def _cmd_density(args) -> int:
    cities, tally, n_records = _load_cities(args)
    if not cities:
        raise EmptyInput("no surviving records to rasterize")
    bbox = args.bbox if args.bbox is not None else _data_bounds(cities)
    grid = density_grid(cities, bbox, args.rows, args.cols)
    display = log_display(grid)
    stem, ext = os.path.splitext(args.out)
    meta = _meta(args, n_records, tally, " overflow=%d" % grid.overflow)
    for path, values in ((args.out, None), (stem + "_log" + ext, display)):
        with _open_out(path) as fh:
            if args.format == "asciigrid":
                write_ascii_grid(grid, fh, values=values)
            else:
                fh.write(",".join("c%d" % c for c in range(grid.n_cols)))
                fh.write("\n")
                write_csv_matrix(grid, fh, values=values)
                fh.write(meta)
    sys.stdout.write("grid_sum=%d overflow=%d\n"
                     % (int(grid.cells.sum()), grid.overflow))
    return 0


_COMMANDS = {
    "centroid": _cmd_centroid,
    "cluster": _cmd_cluster,
    "elbow": _cmd_elbow,
    "trend": _cmd_trend,
    "density": _cmd_density,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        return 0 if exc.code is None else 1
    try:
        return _COMMANDS[args.command](args)
    except (GeoHubError, OSError) as exc:
        sys.stderr.write("geohub: error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
