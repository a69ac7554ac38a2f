"""Exception types raised across the package."""


class GeometryError(ValueError):
    """Base class for all errors raised by logconcave2d."""


class DegenerateInput(GeometryError):
    pass


class NonPositiveScale(GeometryError):
    pass


class SingularMatrix(GeometryError):
    pass


class NotTransversal(GeometryError):
    """The pair is not in the transversal class (or leaves it near r = 1)."""


class NoCrossings(GeometryError):
    pass


class ZeroArea(GeometryError):
    pass


class PerturbationFailed(GeometryError):
    pass


class NoValidStrip(GeometryError):
    pass


class NotAParallelogram(GeometryError):
    pass


class UnclassifiedConfiguration(GeometryError):
    """Square/parallelogram pair with 4 boundary components; needs another reduction pass."""


class NotEdgeCase(GeometryError):
    pass


class InvariantViolation(GeometryError):
    pass


class OutOfRange(GeometryError):
    pass


class InsufficientSamples(GeometryError):
    pass


class OutsideSector(GeometryError):
    pass


class CurvatureViolated(GeometryError):
    pass


class NotConvexProfile(GeometryError):
    pass


class NoViolationFound(GeometryError):
    pass


class GenerationFailed(GeometryError):
    pass
