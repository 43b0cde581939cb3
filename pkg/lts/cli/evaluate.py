"""Evaluation command."""

from pathlib import Path

import typer

from lts.cli.helpers import run_operation
from lts.cli.validators import validate_existing_dir
from lts.constants import DEFAULT_PRED_PATTERN
from lts.core.operations import EvaluateOperation
from lts.core.services.display import print_evaluation
from lts.utils.cli import GlobalOptions, add_global_options, cli_command, start_run_log


@add_global_options
@cli_command
def evaluate_command(
    pred: Path = typer.Option(
        ...,
        "--pred",
        help="Predicted masks: one video directory, or category/video sub-directories",
        callback=validate_existing_dir,
    ),
    gt: Path = typer.Option(
        ..., "--gt", help="Ground truth laid out like --pred", callback=validate_existing_dir
    ),
    report: Path = typer.Option(..., "--report", help="Per-video CSV report to write"),
    pred_pattern: str = typer.Option(
        DEFAULT_PRED_PATTERN, "--pred-pattern", help="File name pattern of predicted masks"
    ),
    *,
    options: GlobalOptions,
) -> None:
    """
    Score predicted masks against ground truth with the F-measure.

    Writes the per-video report and <report>_summary.csv with category means.
    """
    config = options.run_config()
    start_run_log(report.parent, "evaluate", config)
    result = run_operation(
        EvaluateOperation(pred, gt, report, pred_pattern=pred_pattern), config, options
    )
    scores, summary = result.unwrap()
    print_evaluation(scores, summary)
