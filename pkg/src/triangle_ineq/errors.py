"""Exception types shared across the package."""


class DomainError(ValueError):
    """A value fell outside the natural domain of the expression being evaluated."""


class InvalidTriangle(DomainError):
    """Side lengths do not describe a nondegenerate triangle."""


class PreconditionError(ValueError):
    """An operation was called with arguments violating its stated precondition."""
