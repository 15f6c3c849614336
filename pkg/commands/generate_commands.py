"""
Generate Commands - seeded random tensors and the worked-example fixtures
"""

import click

import tensor_store
from commands.common import EXIT_OK, parse_shape, report_errors
from services.tensor_service import TransformSpec
from tensor_store import load_transform, save_tensor, save_transform


@click.command("gen")
@click.option("--shape", callback=parse_shape, required=True, help="Tensor shape as n1,n2,n3.")
@click.option("--seed", type=int, required=True, help="Seed; equal seeds give identical files.")
@click.option("--index", type=int, help="Prescribed index (square shapes only).")
@click.option("--transform", "transform_path", help="Transform file used by --index (identity by default).")
@click.option("--output", "output_path", required=True, help="Where to write the tensor.")
@click.option("--transform-out", "transform_out", help="Also write a random well-conditioned transform here.")
@click.pass_context
@report_errors
def gen_cmd(ctx, shape, seed, index, transform_path, output_path, transform_out):
    """Write a seeded random tensor."""
    generator = ctx.obj["generator_factory"](seed)
    n1, n2, n3 = shape
    if index is None:
        tensor = generator.tensor(shape)
    else:
        if n1 != n2:
            raise click.BadParameter("--index needs a square shape (n1 = n2)", param_hint="--shape")
        t = load_transform(transform_path) if transform_path else TransformSpec.identity(n3)
        tensor = generator.with_index(n1, n3, index, t)
    save_tensor(tensor, output_path)
    if transform_out is not None:
        save_transform(generator.transform(n3), transform_out)
    return EXIT_OK


@click.command("fixtures")
@click.option("--dir", "directory", help="Output directory (default: fixtures).")
@report_errors
def fixtures_cmd(directory):
    """Write the worked-example tensors and transform as JSON files."""
    for path in tensor_store.write_fixtures(directory):
        click.echo(str(path))
    return EXIT_OK
