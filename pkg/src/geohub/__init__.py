"""Geographic analysis of geocoded publication records.

Distances on the WGS-84 ellipsoid (or a sphere), weighted centroids
and dispersion, geodesic k-means with elbow-style k selection, yearly
centroid trends, and density rasters.  A compiled kernel extension is
used when available; the pure-Python twin produces bit-identical
results (set GEOHUB_KERNELS=python to force it, GEOHUB_THREADS to cap
parallelism).
"""

__version__ = "0.1.0"

from geohub.clustering import (CentroidRule, ClusterConfig, ClusterModel,
                               CurveEntry, DispersionCurve, dispersion_curve,
                               kmeans_fit, select_k)
from geohub.corpus import (CityAggregate, PublicationRecord, RegionFilter,
                           RegionKind, RejectTally, aggregate_cities,
                           dedupe_paper_city, filter_region, parse_records)
from geohub.errors import (AntimeridianStraddle, EmptyInput, FatalFormat,
                           GeocodeConflict, GeoHubError, InvalidBBox,
                           InvalidGrid, InvalidThreshold, KMismatch,
                           KTooLarge, NonConvergence, TooFewYears)
from geohub.geodesy import (WGS84, Distance, Ellipsoid, GeoPoint, Metric,
                            great_circle_distance, mean_distance,
                            planar_centroid, rms_dispersion,
                            spherical_centroid, vincenty_distance)
from geohub.raster import (DensityGrid, density_grid, log_display,
                           write_ascii_grid, write_csv_matrix)
from geohub.temporal import (DriftReport, StabilityResult, TrendEntry,
                             TrendSeries, cluster_stability, drift_stats,
                             yearly_centroids)

__all__ = [
    "__version__",
    # errors
    "GeoHubError", "EmptyInput", "AntimeridianStraddle", "NonConvergence",
    "FatalFormat", "InvalidBBox", "GeocodeConflict", "KTooLarge",
    "KMismatch", "TooFewYears", "InvalidGrid", "InvalidThreshold",
    # geodesy
    "Ellipsoid", "WGS84", "GeoPoint", "Distance", "Metric",
    "vincenty_distance", "great_circle_distance", "planar_centroid",
    "spherical_centroid", "rms_dispersion", "mean_distance",
    # corpus
    "PublicationRecord", "CityAggregate", "RejectTally", "RegionKind",
    "RegionFilter", "parse_records", "dedupe_paper_city", "filter_region",
    "aggregate_cities",
    # clustering
    "CentroidRule", "ClusterConfig", "ClusterModel", "CurveEntry",
    "DispersionCurve", "kmeans_fit", "dispersion_curve", "select_k",
    # temporal
    "TrendEntry", "TrendSeries", "DriftReport", "StabilityResult",
    "yearly_centroids", "drift_stats", "cluster_stability",
    # raster
    "DensityGrid", "density_grid", "log_display", "write_ascii_grid",
    "write_csv_matrix",
]
