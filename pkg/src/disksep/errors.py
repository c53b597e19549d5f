"""Exception hierarchy shared by the library and the CLI."""


class DiskSepError(Exception):
    """Base class for all library errors."""


class InvalidInputError(DiskSepError, ValueError):
    """Malformed or inconsistent input (files, graphs, triangulations)."""


class InvalidTriangulationError(InvalidInputError):
    pass


class FormatError(InvalidInputError):
    """A text artifact could not be parsed."""


class PartitionMismatchError(InvalidInputError):
    pass


class ConvergenceError(DiskSepError):
    """Circle packing iteration did not converge.

    Attributes
    ----------
    max_residual : float
        Largest interior angle-sum error (radians) when the iteration stopped.
    iterations : int
        Number of iterations performed.
    """

    def __init__(self, message: str, max_residual: float, iterations: int):
        super().__init__(message)
        self.max_residual = max_residual
        self.iterations = iterations


class BelowRecursionBaseError(DiskSepError):
    """Too few vertices to normalize (need n >= 11); treat the graph as small."""


class DegenerateNormalizationError(DiskSepError):
    """The k-enclosing disk of the centers has zero radius."""
