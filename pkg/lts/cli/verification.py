"""Numerical verification commands."""

from pathlib import Path

import typer

from lts.cli.helpers import run_operation
from lts.cli.validators import validate_samples
from lts.constants import VERIFY_SAMPLES
from lts.core.operations import (
    GradcheckOperation,
    OperationContext,
    OperationRunner,
    VerifyProductOperation,
)
from lts.core.services.display import print_gradcheck_outcomes, print_zero_bin_reports
from lts.utils.cli import GlobalOptions, add_global_options, cli_command, start_run_log


@add_global_options
@cli_command
def verify_product_command(
    samples: int = typer.Option(
        VERIFY_SAMPLES, "--samples", help="Monte Carlo samples", callback=validate_samples
    ),
    out: Path = typer.Option(
        Path("verification"), "--out", help="Directory for the density CSVs and JSON report"
    ),
    *,
    options: GlobalOptions,
) -> None:
    """
    Check the product layer against sampled products of random variables.

    Compares the zero-bin rule with a product of N(0,1) and a bimodal variable,
    and shows how a product of two N(0,1) variables leaves the grid.
    """
    config = options.run_config()
    start_run_log(out, "verify-product", config)
    result = run_operation(VerifyProductOperation(samples, out), config, options)
    report = result.unwrap()
    print_zero_bin_reports(report.zero_bin, report.divergence)


@add_global_options
@cli_command
def gradcheck_command(*, options: GlobalOptions) -> None:
    """
    Compare analytic gradients of every layer with central differences.
    """
    config = options.run_config()
    context = OperationContext(config=config, verbose=options.verbose)
    result = OperationRunner(GradcheckOperation()).run(context)
    if result.data:
        print_gradcheck_outcomes(result.data)
    if not result.is_success():
        raise typer.Exit(code=1)
