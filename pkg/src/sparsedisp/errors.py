"""Exception hierarchy shared by the library and the CLI."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceError(RuntimeError):
    """A configured budget or precision ceiling was exhausted."""


class BudgetExceeded(ResourceError):
    """The box search examined more candidates than allowed.

    ``best`` is the largest empty-box volume found before stopping, so the
    caller still holds a certified lower bound on the dispersion.
    """

    def __init__(self, message, best=None, witness=None):
        super().__init__(message)
        self.best = best
        self.witness = witness


class IndeterminateComparison(ResourceError):
    """Two certified values could not be ordered at the precision ceiling."""
