"""Exception and warning types."""


class GtsoError(Exception):
    """Base class for all package errors."""


class DeterminantViolation(GtsoError, ValueError):
    def __init__(self, deviation):
        self.deviation = float(deviation)
        super().__init__(f"determinant ad - bc deviates from 1 by {self.deviation:.3e}")


class NonpositiveDiagonal(GtsoError, ValueError):
    def __init__(self, a, d):
        self.a, self.d = float(a), float(d)
        super().__init__(f"a and d must be positive (got a={a!r}, d={d!r})")


class EmptySequence(GtsoError, ValueError):
    pass


class LogDomain(GtsoError, ValueError):
    pass


class NotHermitian(GtsoError, ValueError):
    def __init__(self, deviation):
        self.deviation = float(deviation)
        super().__init__(f"generator is not Hermitian: max|H - H^dagger| = {self.deviation:.3e}")


class ZeroState(GtsoError, ValueError):
    pass


class TruncationError(GtsoError, ValueError):
    """Invalid truncation configuration."""


class EnvelopeExceeded(UserWarning):
    """A state label lies outside the accuracy envelope of the truncation."""
