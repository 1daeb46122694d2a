"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside an operation's mathematical domain."""


class ResidueError(DomainError):
    """No modular square root exists for the requested residue."""


class ClassificationError(DomainError):
    """Valuation outside the eventually-periodic regime; use classify()."""


class CapacityError(RuntimeError):
    """Result would require materializing an astronomically large integer."""


class SearchError(RuntimeError):
    """A bounded search was exhausted before finding a witness.

    Carries whatever partial data was assembled in ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class GeneratorError(DomainError):
    """A witness-sequence generator does not converge to its target."""
