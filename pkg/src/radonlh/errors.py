"""Exception hierarchy.

Every numerical failure mode has its own class so callers (and the CLI)
can report the offending condition by name.
"""


class RadonError(ValueError):
    """Base class for all math-domain errors raised by the package."""


class OriginPlane(RadonError):
    """The plane passes through the origin; the inversion map is undefined."""


class UnsupportedDimension(RadonError):
    pass


class OddComponent(RadonError):
    """Input has odd spherical-harmonic content and is not in the range of F."""


class DegreeOverflow(RadonError):
    """Harmonic content above the cutoff degree is not negligible."""


class DecayTooSlow(RadonError):
    pass


class NonPositivePoint(RadonError):
    pass


class GridTooCoarse(RadonError):
    pass


class OrderTooSmall(RadonError):
    pass


class TailUnbounded(RadonError):
    pass


class NotEven(RadonError):
    pass


class Divergent(RadonError):
    """A quadrature refinement sequence failed to converge."""


class ClassViolation(RadonError):
    """Declared weighted-class parameters make R*phi nonexistent."""
