from typing import Any, Dict, Optional


class QDeformError(Exception):
    """
    Base class for errors raised by the q-deformed toolkit.

    Attributes:
        exit_code: Process exit status the CLI reports for this error
        payload: JSON-able diagnostic details
    """
    exit_code = 1

    def __init__(self, message: str, payload: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.payload = dict(payload or {})

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.message, "type": type(self).__name__, "payload": self.payload}


class InvalidParameterError(QDeformError, ValueError):
    """An argument violates a precondition."""
    exit_code = 2


class DomainError(InvalidParameterError):
    """Argument outside the domain of a deformed function."""


class RangeError(InvalidParameterError):
    """Index or parameter outside the supported range."""


class ConstraintError(InvalidParameterError):
    """Arguments are individually valid but inconsistent with each other."""


class SupportError(InvalidParameterError):
    """Divergence requested between vectors with incompatible supports."""


class BoundaryError(InvalidParameterError):
    """A finite difference would step outside 0..n."""


class WindowError(InvalidParameterError):
    """Too few grid points inside an evaluation window."""


class NumericFailure(QDeformError, ArithmeticError):
    """A computation could not be carried out in double precision."""
    exit_code = 3


class FitFailure(NumericFailure):
    """The transformed least-squares problem is degenerate."""


class DegenerateError(NumericFailure):
    """A log-log regression received a zero value."""
