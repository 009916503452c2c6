"""Exception hierarchy shared by all modules."""


class ArrangementError(ValueError):
    """Base class for every error raised by this package."""


class NumericModeError(ArrangementError):
    """An operation cannot be carried out exactly in rational mode."""


class DimensionMismatch(ArrangementError):
    pass


class HypothesisViolated(ArrangementError):
    """Input fails a hypothesis that a construction relies on.

    ``report`` carries the failing VerificationReport when one exists.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class HellyEmpty(ArrangementError):
    """The projected intervals have no common point."""


class DegeneratePair(ArrangementError):
    pass


class CertificateError(ArrangementError):
    """A constructed certificate failed its own re-verification."""


class StrictnessViolation(ArrangementError):
    pass


class Eq1Violated(ArrangementError):
    def __init__(self, i, j, k, residual=None):
        super().__init__(f"slab inequality violated for pair ({i}, {j}) at point {k}")
        self.i, self.j, self.k = i, j, k
        self.residual = residual


class ZeroWidthSlab(ArrangementError):
    pass


class HullContainsOrigin(ArrangementError):
    pass


class PackingInvalid(ArrangementError):
    def __init__(self, invariant, report=None):
        super().__init__(f"packing invariant violated: {invariant}")
        self.invariant = invariant
        self.report = report


class PreconditionViolated(ArrangementError):
    pass


class SearchExhausted(ArrangementError):
    pass


class PoolTooLarge(ArrangementError):
    pass
