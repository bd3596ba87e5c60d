"""Exception types shared across the package."""


class BtsieveError(Exception):
    """Base class for all package-specific errors."""


class DomainError(BtsieveError, ValueError):
    """A precondition on the mathematical domain of an operation failed."""


class CapacityError(BtsieveError, ValueError):
    """Requested computation exceeds a configured size or memory budget."""


class RangeError(BtsieveError, ValueError):
    """An argument lies outside the numerically supported range."""


class PoleError(BtsieveError, ZeroDivisionError):
    """Evaluation was requested exactly at a pole."""


class ConvergenceError(BtsieveError, ArithmeticError):
    """An iterative computation failed to reach its error target."""
