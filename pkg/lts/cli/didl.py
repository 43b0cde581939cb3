"""Classifier training and inference commands."""

from pathlib import Path

import typer

from lts.cli.helpers import run_operation
from lts.cli.validators import (
    validate_existing_dir,
    validate_existing_file,
    validate_frame_index,
    validate_initial_fraction,
    validate_iterations,
)
from lts.core.operations import InferMaskOperation, TrainDidlOperation
from lts.core.services.display import print_train_report
from lts.utils.cli import GlobalOptions, add_global_options, cli_command, start_run_log


@add_global_options
@cli_command
def train_didl_command(
    pool: Path = typer.Option(
        ..., "--pool", help="Pruned histogram pool file", callback=validate_existing_file
    ),
    out: Path = typer.Option(..., "--out", help="Model checkpoint to write"),
    init_frac: float | None = typer.Option(
        None,
        "--init-frac",
        help="Share of the pool in the first training subset",
        callback=validate_initial_fraction,
    ),
    iters: int | None = typer.Option(
        None, "--iters", help="Defect iterations", callback=validate_iterations
    ),
    report: Path | None = typer.Option(
        None, "--report", help="Training report CSV (default: <out>.csv)"
    ),
    *,
    options: GlobalOptions,
) -> None:
    """
    Train the histogram classifier with defect iterations.

    Each iteration retrains on the current subset and then adds every
    misclassified instance of the pool to it.
    """
    config = options.run_config(**{"didl.initial_fraction": init_frac, "didl.iterations": iters})
    report_path = report or out.with_suffix(".csv")
    start_run_log(out.parent, "train-didl", config)
    result = run_operation(TrainDidlOperation(pool, out, report_path), config, options)
    print_train_report(result.unwrap())


@add_global_options
@cli_command
def infer_command(
    model: Path = typer.Option(
        ..., "--model", help="Classifier checkpoint", callback=validate_existing_file
    ),
    frames: Path = typer.Option(
        ..., "--frames", help="Directory of input frames", callback=validate_existing_dir
    ),
    t: int = typer.Option(..., "--t", help="Frame index to segment", callback=validate_frame_index),
    out: Path = typer.Option(..., "--out", help="Mask image to write"),
    *,
    options: GlobalOptions,
) -> None:
    """
    Segment one frame with a trained classifier.
    """
    config = options.run_config()
    start_run_log(out.parent, "infer", config)
    run_operation(InferMaskOperation(model, frames, t, out), config, options)
