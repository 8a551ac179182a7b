"""Exception types shared across the package."""


class KoroboxError(Exception):
    """Base class for all package errors."""


class DomainError(KoroboxError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionMismatchError(KoroboxError, ValueError):
    """Operands live in different dimensions."""


class InfeasibleError(KoroboxError, RuntimeError):
    """A computation exceeds a configured cap or feasibility limit."""
