"""Exception types shared across the toolkit."""


class WulffkitError(Exception):
    """Base class for all toolkit errors."""


class ZeroDirection(WulffkitError, ValueError):
    """Direction vector is below the zero floor; gauges are undefined there."""


class NonConvergence(WulffkitError, RuntimeError):
    """An iterative solver exhausted its budget before reaching tolerance."""


class DegenerateChart(WulffkitError, ValueError):
    """Coordinate tangents are (numerically) linearly dependent."""


class NotTransversal(WulffkitError, ValueError):
    """Transversal field is numerically tangent to the surface."""


class IndexOutOfRange(WulffkitError, IndexError):
    """Symmetric-function order k outside the valid range 0..n."""


class TooLarge(WulffkitError, ValueError):
    """A combinatorial oracle was asked to exceed its size guard."""


class BoundaryInsideRegion(WulffkitError, ValueError):
    """Patch boundary intersects the gauge region of an integral identity."""


class OriginNotOnSurface(WulffkitError, ValueError):
    """No parameter point maps to the origin within tolerance."""


class NotClosed(WulffkitError, ValueError):
    """Operation requires a closed surface."""


class NotEquiaffine(WulffkitError, ValueError):
    """Transversal field has a non-vanishing connection form."""


class GaugeZero(WulffkitError, ValueError):
    """Gauge vanishes where a positive value is required."""


class ConfigError(WulffkitError, ValueError):
    """Scenario configuration failed validation."""
