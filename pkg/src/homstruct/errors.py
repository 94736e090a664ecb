"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised when caller-supplied data violates a documented precondition."""


class CapabilityError(RuntimeError):
    """Raised when a request exceeds a configured size bound."""


class InternalError(RuntimeError):
    """Raised when a self-verification step fails; indicates a bug, not bad input."""
