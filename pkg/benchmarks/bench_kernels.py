"""Time the compiled distance kernels against the pure-Python fallback.

Both backends compute bit-identical results; this script measures what
the compiled extension buys.  Run from a checkout with the package
installed:

    python3 benchmarks/bench_kernels.py --pairs 200000 --points 20000
"""

import argparse
import time

import numpy as np

from geohub import _pykernels, kernels
from geohub.geodesy import (EARTH_MEAN_RADIUS_M, VINCENTY_MAX_ITER,
                            VINCENTY_TOL_RAD, WGS84)

try:
    from geohub import _ckernels
except ImportError:
    _ckernels = None


def run_case(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(
        description="compare compiled and pure-Python kernel timings")
    parser.add_argument("--pairs", type=int, default=200000,
                        help="array length for pair_distances")
    parser.add_argument("--points", type=int, default=20000,
                        help="points for assign_nearest (8 centroids)")
    parser.add_argument("--sums", type=int, default=2000000,
                        help="array length for chunked_weighted_sums")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for the compiled backend")
    parser.add_argument("--repeats", type=int, default=3,
                        help="take the best of this many timings")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    if _ckernels is None:
        parser.error("compiled backend not importable; build it first")

    rng = np.random.default_rng(args.seed)
    threads = kernels.resolve_threads(args.threads)
    a, f = WGS84.a, WGS84.f
    geo_args = (kernels.METRIC_ELLIPSOID, a, f, EARTH_MEAN_RADIUS_M,
                VINCENTY_TOL_RAD, VINCENTY_MAX_ITER, False)

    lats1 = rng.uniform(-70.0, 70.0, args.pairs)
    lons1 = rng.uniform(-179.0, 179.0, args.pairs)
    lats2 = lats1 + rng.uniform(-8.0, 8.0, args.pairs)
    lons2 = lons1 + rng.uniform(-8.0, 8.0, args.pairs)
    np.clip(lats2, -90.0, 90.0, out=lats2)
    np.clip(lons2, -180.0, 180.0, out=lons2)

    plats = rng.uniform(25.0, 49.0, args.points)
    plons = rng.uniform(-124.0, -67.0, args.points)
    clats = rng.uniform(25.0, 49.0, 8)
    clons = rng.uniform(-124.0, -67.0, 8)

    vals = rng.uniform(0.0, 1e6, args.sums)
    wts = rng.uniform(0.0, 50.0, args.sums)

    cases = [
        ("pair_distances[%d]" % args.pairs,
         lambda mod, t: mod.pair_distances(lats1, lons1, lats2, lons2,
                                           *geo_args, t)),
        ("assign_nearest[%dx8]" % args.points,
         lambda mod, t: mod.assign_nearest(plats, plons, clats, clons,
                                           *geo_args, t)),
        ("chunked_sums[%d]" % args.sums,
         lambda mod, t: mod.chunked_weighted_sums(vals, wts, t)),
    ]

    print("threads=%d repeats=%d" % (threads, args.repeats))
    print("%-28s %12s %12s %9s" % ("kernel", "compiled", "python", "speedup"))
    for name, call in cases:
        t_c, r_c = run_case(lambda: call(_ckernels, threads), args.repeats)
        t_p, r_p = run_case(lambda: call(_pykernels, 1), args.repeats)
        # parity spot check while we are here
        if isinstance(r_c, tuple):
            pairs = zip(r_c, r_p)
            same = all(np.array_equal(np.asarray(x), np.asarray(y),
                                      equal_nan=True) for x, y in pairs)
        else:
            same = r_c == r_p
        flag = "" if same else "  RESULTS DIFFER"
        print("%-28s %10.4f s %10.4f s %8.1fx%s"
              % (name, t_c, t_p, t_p / t_c, flag))


if __name__ == "__main__":
    main()
