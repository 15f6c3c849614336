"""
Error types raised by the tensor services.

Services raise these; the command layer turns them into exit codes.
"""

from typing import Optional


class TensorError(Exception):
    """Base class for every error raised by the services."""


class ShapeError(TensorError, ValueError):
    """Operand dimensions do not conform."""


class SliceIndexError(TensorError, IndexError):
    """Frontal slice index out of range."""


class SingularityError(TensorError):
    """A transform matrix or a transformed slice is numerically singular."""

    def __init__(self, message: str, slice_index: Optional[int] = None):
        super().__init__(message)
        self.slice_index = slice_index


class NumericalError(TensorError):
    """A LAPACK routine failed to converge."""

    def __init__(self, message: str, slice_index: Optional[int] = None):
        super().__init__(message)
        self.slice_index = slice_index


class InvalidInverseError(TensorError, ValueError):
    """A tensor passed as a {1}-inverse does not satisfy A * X * A = A."""


class TensorFileError(TensorError):
    """Base class for tensor file problems."""


class TensorFileParseError(TensorFileError):
    """The file is not valid JSON."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class TensorFileSchemaError(TensorFileError):
    """The JSON parses but does not describe a tensor."""


class ConditioningWarning(UserWarning):
    """The transform matrix is badly conditioned."""
