"""Exception types raised by cosnmf."""


class CosNMFError(Exception):
    """Base class for all package errors."""


class DimensionError(CosNMFError, ValueError):
    """Shapes or indices do not fit the matrix they refer to."""


class InvalidInputError(CosNMFError, ValueError):
    """Input violates a precondition (negative entries, zero columns, ...)."""


class InvalidWeightError(InvalidInputError):
    """A weight that must be strictly positive is not."""


class UnsupportedSizeError(CosNMFError, ValueError):
    """Matrix exceeds the size a small dense routine is meant for."""


class BalanceError(CosNMFError, ArithmeticError):
    """Sinkhorn balancing is infeasible (zero row or column)."""


class DegenerateError(CosNMFError, ArithmeticError):
    """A solver produced a degenerate result.

    ``partial`` carries whatever was obtained before the failure
    (e.g. a short index set from an early-stopped SPA).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ParseError(CosNMFError, ValueError):
    """Malformed input file; ``line`` is the 1-based offending line."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.path = path
        self.line = line
