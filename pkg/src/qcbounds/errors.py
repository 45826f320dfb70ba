"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when an input fails a structural or numerical validity check."""


class InfeasibleError(RuntimeError):
    """Raised when a requested object provably does not exist."""
