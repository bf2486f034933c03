"""Exception hierarchy shared across the package.

Everything raised on purpose derives from GeoHubError so callers can
catch one type at the boundary (the CLI maps it to exit code 2).
"""


class GeoHubError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInput(GeoHubError):
    """An operation that needs at least one record received none."""


class AntimeridianStraddle(GeoHubError):
    """Planar centroid requested for points spanning the 180th meridian."""


class NonConvergence(GeoHubError):
    """The iterative geodesic solver failed for a point pair."""


class FatalFormat(GeoHubError):
    """Input file is structurally unusable (bad header, wrong delimiter)."""


class InvalidBBox(GeoHubError):
    """Bounding box has min >= max or coordinates out of range."""


class GeocodeConflict(GeoHubError):
    """One city key maps to materially different coordinates."""


class KTooLarge(GeoHubError):
    """Requested more clusters than there are distinct cities."""


class KMismatch(GeoHubError):
    """Cluster models being compared have different k."""


class TooFewYears(GeoHubError):
    """Trend fitting needs at least two distinct years."""


class InvalidGrid(GeoHubError):
    """Raster dimensions or bounds are unusable."""


class InvalidThreshold(GeoHubError):
    """A selection threshold is not a positive finite number."""
