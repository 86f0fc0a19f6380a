"""Exception types shared across the package."""


class InfeasibleGeometryError(RuntimeError):
    """Random placement could not satisfy the spacing constraints."""


class RankDeficientSystemError(RuntimeError):
    """Modal system too close to rank deficiency for a trustworthy solve.

    Carries ``condition`` (ratio of largest to smallest singular value of
    the Gram matrix) and, when raised during a sweep, ``frequency_hz``.
    """

    def __init__(self, message: str, condition: float, frequency_hz: float | None = None):
        super().__init__(message)
        self.condition = condition
        self.frequency_hz = frequency_hz


class DegeneratePatternError(ValueError):
    """Target pattern has a null at its own steering direction."""


class FrequencyGridError(ValueError):
    """Requested frequency is not a point of the filter's design grid."""


class InvalidFilterError(ValueError):
    """Filter weights unusable for metric evaluation (e.g. zero norm)."""


class GeometryMismatchError(ValueError):
    """Geometry file does not match the one a filter was designed for."""


class AllTrialsFailedError(RuntimeError):
    """Every Monte Carlo trial failed; no statistics can be formed."""
