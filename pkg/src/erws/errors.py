"""Exception types shared across the package."""


class ErwsError(Exception):
    """Base class for all package errors."""


class InvalidSimplex(ErwsError):
    """(p, q, r) is not a probability vector within tolerance."""


class DegenerateParameters(ErwsError):
    """Parameters sit on a pole (q=1, i.e. a=-1) or freeze the walk (r=1)."""


class DomainError(ErwsError):
    """Argument outside the mathematical domain of an operation."""


class RegimeError(ErwsError):
    """Operation requested outside the regime where it is defined."""


class ConvergenceFailure(ErwsError):
    """A series could not be certified to the requested tolerance."""


class CapacityError(ErwsError):
    """Request exceeds a hard size cap (oracle horizon, stored increments)."""


class BudgetError(ErwsError):
    """Requested run exceeds the configured step budget."""


class MissingIncrements(ErwsError):
    """Path record lacks the full per-step increments needed here."""


class IoError(ErwsError):
    """File read/write failure, with path context in the message."""
