"""
Main command-line entry point for the tensor generalized-inverse toolkit.

This module provides the factory for the click command group.
Commands are organized in separate modules in the commands package.
"""

import logging
import sys
from typing import Callable, List, Optional

import click

from commands import register_commands
from commands.common import EXIT_FAILED, EXIT_OK
from services.generator_service import TensorGenerator

PROG_NAME = "tensor-inverse"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def create_cli(generator_factory: Callable[[int], TensorGenerator] = TensorGenerator) -> click.Group:
    """
    Factory function to create and configure the command group.

    Args:
        generator_factory: builds the random source for a seed; tests inject a mock

    Returns:
        click.Group: Configured command group
    """

    @click.group(name=PROG_NAME)
    @click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default="WARNING",
                  show_default=True, help="Logging threshold for diagnostics on stderr.")
    @click.pass_context
    def cli(ctx, log_level):
        """Generalized inverses of third-order tensors under the M-product."""
        logging.basicConfig(format=LOG_FORMAT, stream=sys.stderr)
        logging.getLogger().setLevel(log_level.upper())
        ctx.ensure_object(dict)
        ctx.obj["generator_factory"] = generator_factory

    # Register all commands
    register_commands(cli)

    return cli


def cli_main(argv: Optional[List[str]] = None, cli: Optional[click.Group] = None) -> int:
    """
    Run the command line and return its exit code.

    0 success, 1 failed verification, 2 usage or file error, 3 numerical error.
    """
    if cli is None:
        cli = create_cli()
    try:
        result = cli.main(args=argv, prog_name=PROG_NAME, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted.", err=True)
        return EXIT_FAILED
    return result if isinstance(result, int) else EXIT_OK


if __name__ == '__main__':
    sys.exit(cli_main())
