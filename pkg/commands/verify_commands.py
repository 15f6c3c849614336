"""
Verify Commands - residual reports for claimed inverses
"""

import click

from commands.common import EXIT_FAILED, EXIT_OK, load_optional, report_errors, require
from services import verify_service
from tensor_store import load_tensor, load_transform


@click.command("verify")
@click.option("--claim", type=click.Choice(verify_service.CLAIMS), required=True, help="What X claims to be.")
@click.option("--a", "a_path", required=True, help="Tensor file holding A.")
@click.option("--x", "x_path", required=True, help="Tensor file holding the candidate X.")
@click.option("--a-minus", "a_minus_path", help="Tensor file holding the fixed {1}-inverse A^-.")
@click.option("--transform", "transform_path", required=True, help="Transform file holding M.")
@click.option("--tol", type=float, help="Relative tolerance (default 1e-8).")
@click.option("--format", "output_format", type=click.Choice(("json", "text")), default="json",
              show_default=True)
@report_errors
def verify_cmd(claim, a_path, x_path, a_minus_path, transform_path, tol, output_format):
    """Check the defining equations of CLAIM for X; exit 0 only if all pass."""
    a = load_tensor(a_path)
    x = load_tensor(x_path)
    a_minus = load_optional(a_minus_path)
    t = load_transform(transform_path)

    if claim == verify_service.CLAIM_MP:
        report = verify_service.check_penrose(a, x, t, tol=tol)
    elif claim == verify_service.CLAIM_ONE_MP:
        if a_minus is None:
            report = verify_service.check_one_mp_system(a, x, t, tol=tol)
        else:
            report = verify_service.check_one_mp(a, x, a_minus, t, tol=tol)
    elif claim == verify_service.CLAIM_DRAZIN:
        report = verify_service.check_drazin(a, x, t, tol=tol)
    elif claim == verify_service.CLAIM_ONE_D:
        require("--a-minus", a_minus, "for --claim one-d")
        report = verify_service.check_one_d(a, x, a_minus, t, tol=tol)
    elif claim == verify_service.CLAIM_ONE_STAR:
        require("--a-minus", a_minus, "for --claim one-star")
        report = verify_service.check_one_star(a, x, a_minus, t, tol=tol)
    elif claim == verify_service.CLAIM_EXACT:
        report = verify_service.check_exact(a, x, t, tol=tol)
    else:
        report = verify_service.check_one_inverse(a, x, t, tol=tol)

    click.echo(report.to_json() if output_format == "json" else report.to_text())
    if not report.passed:
        click.echo(f"Verification of claim '{claim}' failed.", err=True)
        return EXIT_FAILED
    return EXIT_OK
