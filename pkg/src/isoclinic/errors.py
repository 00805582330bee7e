"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain of an operation (shape, rank, Hermiticity...)."""


class FactorizationError(ArithmeticError):
    """A LAPACK factorization failed to converge."""


class PreconditionError(ValueError):
    """A mathematical precondition of an operation does not hold."""


class DegeneracyError(PreconditionError):
    """The restricted error operators are linearly dependent."""
