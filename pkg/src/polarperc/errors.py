"""Exception types shared across the package."""


class PolarpercError(Exception):
    """Base class for package-specific failures."""


class ConvergenceError(PolarpercError):
    """An iterative procedure failed to converge within its budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ResourceLimitError(PolarpercError):
    """A request would exceed the enumeration/memory budget."""


class ExtinctionError(PolarpercError):
    """A stochastic process died before the requested measurement."""


class FitError(PolarpercError):
    """Not enough usable data, or degenerate abscissa, for a regression."""


class BracketError(PolarpercError):
    """Bisection could not find a sign change in the initial bracket."""
