"""Exception types shared across the package."""


class NpcmajError(Exception):
    """Base class for all package-specific errors."""


class InvalidPoint(NpcmajError):
    pass


class SpaceMismatch(NpcmajError):
    pass


class ParameterOutOfRange(NpcmajError):
    pass


class BaseMismatch(NpcmajError):
    pass


class InvalidMeasure(NpcmajError):
    pass


class NonFinite(NpcmajError):
    pass


class NotConverged(NpcmajError):
    pass


class SolverNotConverged(NotConverged):
    pass


class DimensionMismatch(NpcmajError):
    pass


class LengthMismatch(DimensionMismatch):
    pass


class EmptyInput(NpcmajError):
    pass


class NotProbabilityVector(NpcmajError):
    pass


class NotEuclidean(NpcmajError):
    pass


class NotSquare(NpcmajError):
    pass


class NotDoublyStochastic(NpcmajError):
    pass


class MatchingFailed(NpcmajError):
    pass


class TooLarge(NpcmajError):
    pass


class NoCertificate(NpcmajError):
    pass


class InvalidCertificate(NpcmajError):
    pass


class ArityMismatch(NpcmajError):
    pass


class AlphaOutOfRange(NpcmajError):
    pass


class NotSymmetric(NpcmajError):
    pass


class UnknownGauge(NpcmajError):
    pass


class PreconditionNotMet(NpcmajError):
    pass


class InvalidInstance(NpcmajError):
    """Raised when an instance file fails schema validation."""
