"""Exception types shared across the toolkit."""


class LmgError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgumentError(LmgError, ValueError):
    """An input violates an operation's contract."""


class SingularityError(LmgError):
    """Spectral parameters collided with a pole (E = +/-eta) or with each other."""


class UnsupportedRegimeError(LmgError):
    """The operation was asked to work outside its validity domain."""


class IncompleteSolveError(LmgError):
    """The solver could not produce the full, oracle-validated solution list."""

    def __init__(self, message: str, found: int = 0, needed: int = 0):
        super().__init__(message)
        self.found = found
        self.needed = needed


class ComplexPaironsError(LmgError):
    """Spectral parameters left the real axis (possible in the hyperbolic regime)."""


class LeakageError(LmgError):
    """A state that must live on the one-hot subspace carries weight elsewhere."""


class NumericFailureError(LmgError):
    """An iterative routine exhausted its budget without converging."""
