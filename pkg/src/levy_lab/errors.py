"""Exception hierarchy shared by every module."""


class LevyLabError(Exception):
    """Base class for all library errors."""


class OutOfDomain(LevyLabError, ValueError):
    """A parameter or argument lies outside its admissible domain."""

    def __init__(self, field, message=None):
        self.field = field
        super().__init__(message or f"{field} out of domain")


class Unsupported(OutOfDomain):
    """The request is well formed but has no meaningful answer."""


class AlphaMismatch(OutOfDomain):
    def __init__(self, alpha0, alpha1):
        super().__init__("alpha", f"stability indices differ: {alpha0} != {alpha1}")


class QuadratureFailure(LevyLabError, ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""


class RejectionBudgetExceeded(LevyLabError, RuntimeError):
    """A rejection loop exhausted its proposal budget."""


class EmptyInput(LevyLabError, ValueError):
    pass


class InsufficientTail(LevyLabError, ValueError):
    pass


class OutOfRange(LevyLabError, ValueError):
    pass
