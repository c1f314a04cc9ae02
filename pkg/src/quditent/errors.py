"""Exception hierarchy shared by all modules."""


class QuditentError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(QuditentError, ValueError):
    """Shapes or subsystem dimensions are incompatible with the operation."""


class SymmetryError(QuditentError, ValueError):
    """A matrix required to be Hermitian is not, within tolerance."""


class ConvergenceError(QuditentError, RuntimeError):
    """An iterative kernel hit its iteration cap before converging."""


class UndefinedMeasureError(QuditentError, ValueError):
    """The measure is undefined for the given state (e.g. d = 1)."""


class ArgumentError(QuditentError, ValueError):
    """A scalar argument is out of its admissible range."""


class InvariantError(QuditentError, ValueError):
    """A state fails its normalization, Hermiticity or positivity invariant."""
