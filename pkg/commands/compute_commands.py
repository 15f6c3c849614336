"""
Compute Commands - generalized inverses and the index of a tensor file
"""

import json
import logging

import click

from commands.common import EXIT_OK, exclusive, load_optional, report_errors, require
from services.inverse_service import (
    drazin_inverse,
    exact_inverse,
    mp_inverse,
    one_d_inverse,
    one_mp_inverse,
    one_star_inverse,
    random_params,
    slice_svd,
    tensor_index,
)
from tensor_store import load_tensor, load_transform, save_tensor

logger = logging.getLogger(__name__)

OPERATIONS = ("mp", "one-mp", "drazin", "one-d", "one-star", "exact", "inv", "index")

_ONE_GAMMA = {
    "one-mp": one_mp_inverse,
    "one-d": one_d_inverse,
    "one-star": one_star_inverse,
}


@click.command("compute")
@click.option("--op", "operation", type=click.Choice(OPERATIONS), required=True, help="Inverse to compute.")
@click.option("--input", "input_path", required=True, help="Tensor file holding A.")
@click.option("--transform", "transform_path", required=True, help="Transform file holding M.")
@click.option("--params", "params_path", help="Tensor file holding a fixed {1}-inverse A^- (original domain).")
@click.option("--seed", type=int, help="Seed for random {1}-inverse parameters.")
@click.option("--output", "output_path", help="Where to write the result.")
@report_errors
def compute_cmd(operation, input_path, transform_path, params_path, seed, output_path):
    """Compute a generalized inverse of A under the M-product."""
    exclusive("--params", params_path, "--seed", seed)
    a = load_tensor(input_path)
    t = load_transform(transform_path)

    if operation == "index":
        result = tensor_index(a, t)
        click.echo(json.dumps({
            "per_slice": list(result.per_slice),
            "overall": result.overall,
            "stable_ranks": list(result.stable_ranks),
        }))
        return EXIT_OK

    require("--output", output_path, f"for --op {operation}")
    if operation in _ONE_GAMMA:
        a_minus = load_optional(params_path)
        params = random_params(slice_svd(a, t), seed) if seed is not None else None
        x = _ONE_GAMMA[operation](a, t, params, a_minus=a_minus)
    else:
        if params_path is not None or seed is not None:
            logger.warning("--op %s has no free parameters; ignoring --params/--seed.", operation)
        if operation == "mp":
            x = mp_inverse(a, t)
        elif operation == "drazin":
            x = drazin_inverse(a, t)
        else:
            x = exact_inverse(a, t)

    save_tensor(x, output_path)
    click.echo(f"Wrote {operation} result of shape {list(x.shape)} to {output_path}", err=True)
    return EXIT_OK
