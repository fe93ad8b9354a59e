class RealnormError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(RealnormError, ValueError):
    pass


class DomainError(RealnormError, ValueError):
    pass


class EmbeddingCollision(RealnormError):
    """Two formally distinct values embed to the same rational."""


class DegenerateProjection(RealnormError):
    """Cut real parts tie, so the low horizontal line sees no arc diagram."""


class InvariantViolation(RealnormError):
    pass


class InvalidMove(RealnormError):
    pass


class PreconditionError(RealnormError):
    pass


class AmbiguousCollision(RealnormError):
    """Two switch events happen at the same translation parameter."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class TerminationViolation(RealnormError):
    pass


class InvalidRetarget(RealnormError):
    pass


class Unclassifiable(RealnormError):
    pass


class InternalError(RealnormError):
    pass
