"""
Commands Package - Initialize all CLI commands
"""

from .compute_commands import compute_cmd
from .verify_commands import verify_cmd
from .solve_commands import solve_cmd
from .generate_commands import gen_cmd, fixtures_cmd

def register_commands(cli):
    """Register all commands with the click group."""
    cli.add_command(compute_cmd)
    cli.add_command(verify_cmd)
    cli.add_command(solve_cmd)
    cli.add_command(gen_cmd)
    cli.add_command(fixtures_cmd)
