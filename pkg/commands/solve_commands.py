"""
Solve Commands - solution families of the multilinear systems
"""

import click

from commands.common import EXIT_FAILED, EXIT_OK, exclusive, load_optional, report_errors
from services.solver_service import RIGHT_FREE, SYSTEMS, solve
from services.verify_service import check_system
from tensor_store import load_tensor, load_transform, save_family, save_tensor


@click.command("solve")
@click.option("--system", type=click.Choice(SYSTEMS), required=True, help="System to solve.")
@click.option("--a", "a_path", required=True, help="Tensor file holding A.")
@click.option("--b", "b_path", help="Tensor file holding B (projected systems).")
@click.option("--z", "z_path", help="Tensor file holding the free tensor Z.")
@click.option("--seed", type=int, help="Seed for a random free tensor Z.")
@click.option("--params", "params_path", help="Tensor file holding a fixed {1}-inverse A^- (original domain).")
@click.option("--transform", "transform_path", required=True, help="Transform file holding M.")
@click.option("--output", "output_path", required=True, help="Where to write the chosen solution X.")
@click.option("--family-out", "family_path", help="Where to write the solution family.")
@click.pass_context
@report_errors
def solve_cmd(ctx, system, a_path, b_path, z_path, seed, params_path, transform_path, output_path, family_path):
    """
    Build the solution family of SYSTEM and write one member of it.

    Without --z or --seed the free tensor is zero and the particular
    solution is written. The residual of the system is reported on stdout.
    """
    exclusive("--z", z_path, "--seed", seed)
    a = load_tensor(a_path)
    b = load_optional(b_path)
    a_minus = load_optional(params_path)
    t = load_transform(transform_path)

    family = solve(system, a, t, b=b, a_minus=a_minus)
    if z_path is not None:
        x = family.instantiate(load_tensor(z_path), t)
    elif seed is not None:
        x = family.random_instance(seed, t, ctx.obj["generator_factory"])
    else:
        x = family.particular

    save_tensor(x, output_path)
    if family_path is not None:
        save_family(family, family_path)

    fixed_inverse = family.particular if family.side == RIGHT_FREE else None
    report = check_system(system, a, x, t, b=b, a_minus=fixed_inverse)
    click.echo(report.to_json())
    if not report.passed:
        click.echo(f"Solution does not satisfy system '{system}'.", err=True)
        return EXIT_FAILED
    return EXIT_OK
