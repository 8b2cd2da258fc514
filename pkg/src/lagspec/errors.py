"""Exception hierarchy shared by all modules."""


class LagspecError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(LagspecError, ValueError):
    pass


class DimensionMismatch(LagspecError, ValueError):
    pass


class RankDeficientFrame(LagspecError, ValueError):
    pass


class NotLagrangian(LagspecError, ValueError):
    pass


class InvalidProjector(LagspecError, ValueError):
    pass


class NotSymplectic(LagspecError, ValueError):
    pass


class MultivaluedRelation(LagspecError, ValueError):
    pass


class NotTransversal(LagspecError, ValueError):
    pass


class TransversalityViolated(NotTransversal):
    pass


class TransversalSearchFailed(LagspecError, RuntimeError):
    pass


class NoAdmissibleEpsilon(LagspecError, RuntimeError):
    pass


class EpsilonInExceptionSet(LagspecError, ValueError):
    pass


class InternalInconsistency(LagspecError, RuntimeError):
    """Two routes that must agree exactly did not."""


class UnresolvedCrossing(LagspecError, RuntimeError):
    pass


class NonIsolatedCrossing(UnresolvedCrossing):
    pass


class EmptyIntersection(LagspecError, ValueError):
    pass


class MonotonicityViolated(LagspecError, RuntimeError):
    pass


class DegenerateCrossing(LagspecError, RuntimeError):
    pass


class IntegrationError(LagspecError, RuntimeError):
    pass
