"""Exception types shared across the package."""


class HidenetError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(HidenetError):
    """A network, game, or file violates a model constraint."""


class PreconditionError(HidenetError):
    """An algorithm's entry condition does not hold for the given input."""


class BudgetExceededError(HidenetError):
    """The instance is too large for an exhaustive search."""
