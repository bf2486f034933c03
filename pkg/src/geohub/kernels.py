"""Backend selection and thread resolution for the distance kernels.

The compiled extension (geohub._ckernels) is preferred when importable;
geohub._pykernels is the drop-in fallback.  Both produce bit-identical
results, so selection only affects speed.

Environment knobs:
  GEOHUB_KERNELS=python   force the pure-Python backend
  GEOHUB_KERNELS=c        require the compiled backend (ImportError if absent)
  GEOHUB_THREADS=N        cap worker threads (default: all cores)
"""

import os

from geohub import _pykernels

_requested = os.environ.get("GEOHUB_KERNELS", "").strip().lower()
if _requested == "python":
    _impl = _pykernels
    BACKEND = "python"
elif _requested in ("c", "compiled"):
    from geohub import _ckernels as _impl
    BACKEND = "c"
else:
    try:
        from geohub import _ckernels as _impl
        BACKEND = "c"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

CHUNK = _impl.CHUNK
METRIC_ELLIPSOID = _impl.METRIC_ELLIPSOID
METRIC_SPHERE = _impl.METRIC_SPHERE

vincenty_one = _impl.vincenty_one
haversine_one = _impl.haversine_one
pair_distances = _impl.pair_distances
point_distances = _impl.point_distances
assign_nearest = _impl.assign_nearest
chunked_weighted_sums = _impl.chunked_weighted_sums


def resolve_threads(requested=None):
    """Effective worker-thread count: requested, capped by GEOHUB_THREADS.

    Both limits default to the machine's core count; the result is
    always at least 1.  Thread count never changes numeric results,
    only wall time.
    """
    cores = os.cpu_count() or 1
    cap = os.environ.get("GEOHUB_THREADS", "").strip()
    if cap:
        try:
            cores = min(cores, int(cap))
        except ValueError:
            pass  # unparseable cap: ignore rather than die in a hot path
    if requested is not None:
        cores = min(cores, int(requested))
    return max(1, cores)
