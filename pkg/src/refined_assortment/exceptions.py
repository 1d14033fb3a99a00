class RAOPError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstance(RAOPError, ValueError):
    pass


class InvalidRefinement(RAOPError, ValueError):
    pass


class InvalidRatio(RAOPError, ValueError):
    pass


class SizeLimit(RAOPError):
    """The requested exact method would enumerate too many points."""


class UnknownSolver(RAOPError, KeyError):
    pass


class NotFittedError(RAOPError, AttributeError):
    pass
