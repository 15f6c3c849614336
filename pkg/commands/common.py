"""
Shared helpers for the command modules: exit codes, error mapping and
loading of the files every command takes.
"""

import functools
import logging
from typing import Callable, Optional

import click

from services.errors import (
    InvalidInverseError,
    NumericalError,
    ShapeError,
    SingularityError,
    TensorError,
    TensorFileError,
)
from services.tensor_service import DenseTensor3
from tensor_store import load_tensor

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def report_errors(command: Callable[..., int]) -> Callable[..., int]:
    """
    Map service errors raised by a command to exit codes, with the message on stderr.

    Bad files and bad shapes are usage errors (2); singular or
    non-convergent numerics and invalid {1}-inverses are numerical errors (3).
    """

    @functools.wraps(command)
    def wrapper(*args, **kwargs) -> int:
        try:
            return command(*args, **kwargs)
        except (TensorFileError, ShapeError) as exc:
            click.echo(f"Error: {exc}", err=True)
            return EXIT_USAGE
        except (SingularityError, NumericalError, InvalidInverseError) as exc:
            click.echo(f"Numerical error: {exc}", err=True)
            return EXIT_NUMERICAL
        except TensorError as exc:
            click.echo(f"Error: {exc}", err=True)
            return EXIT_NUMERICAL
        except ValueError as exc:
            click.echo(f"Error: {exc}", err=True)
            return EXIT_USAGE

    return wrapper


def load_optional(path: Optional[str]) -> Optional[DenseTensor3]:
    return None if path is None else load_tensor(path)


def exclusive(first_name: str, first, second_name: str, second) -> None:
    """Reject two options that cannot be combined."""
    if first is not None and second is not None:
        raise click.UsageError(f"{first_name} and {second_name} cannot be used together.")


def require(name: str, value, reason: str) -> None:
    if value is None:
        raise click.UsageError(f"{name} is required {reason}.")


def parse_shape(ctx, param, value: Optional[str]):
    """click callback turning 'n1,n2,n3' into a tuple of three positive ints."""
    if value is None:
        return None
    try:
        dims = tuple(int(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter("expected three comma-separated integers, e.g. 3,3,2")
    if len(dims) != 3 or min(dims) < 1:
        raise click.BadParameter("expected three positive integers, e.g. 3,3,2")
    return dims
