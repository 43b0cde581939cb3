"""Refine-block training and refinement commands."""

from pathlib import Path

import typer

from lts.cli.helpers import run_operation
from lts.cli.validators import (
    validate_coverage_layers,
    validate_epochs,
    validate_existing_dir,
    validate_existing_file,
    validate_frame_index,
    validate_frame_stride,
)
from lts.core.operations import RefineOperation, TrainSbrOperation
from lts.utils.cli import GlobalOptions, add_global_options, cli_command, start_run_log


@add_global_options
@cli_command
def train_sbr_command(
    corpus: Path = typer.Option(
        ...,
        "--corpus",
        help="Scene folder, or a tree of scenes, each with input/ and groundtruth/",
        callback=validate_existing_dir,
    ),
    out: Path = typer.Option(..., "--out", help="Refine-block checkpoint to write"),
    epochs: int | None = typer.Option(
        None, "--epochs", help="Training epochs", callback=validate_epochs
    ),
    didl: Path | None = typer.Option(
        None,
        "--didl",
        help="Classifier whose masks are refined during training "
        "(default: corrupted ground truth)",
        callback=validate_existing_file,
    ),
    frame_stride: int | None = typer.Option(
        None,
        "--frame-stride",
        help="Use every N-th frame of each scene",
        callback=validate_frame_stride,
    ),
    *,
    options: GlobalOptions,
) -> None:
    """
    Train the refine block on patches of frames and their masks.
    """
    config = options.run_config(**{"sbr.epochs": epochs, "sbr.frame_stride": frame_stride})
    start_run_log(out.parent, "train-sbr", config)
    run_operation(TrainSbrOperation(corpus, out, didl_path=didl), config, options)


@add_global_options
@cli_command
def refine_command(
    sbr: Path = typer.Option(
        ..., "--sbr", help="Refine-block checkpoint", callback=validate_existing_file
    ),
    frames: Path = typer.Option(
        ..., "--frames", help="Directory of input frames", callback=validate_existing_dir
    ),
    t: int = typer.Option(..., "--t", help="Frame index to refine", callback=validate_frame_index),
    out: Path = typer.Option(..., "--out", help="Refined mask image to write"),
    didl: Path | None = typer.Option(
        None,
        "--didl",
        help="Classifier producing the initial mask",
        callback=validate_existing_file,
    ),
    mask: Path | None = typer.Option(
        None,
        "--mask",
        help="Initial mask image from any source, instead of --didl",
        callback=validate_existing_file,
    ),
    l: int | None = typer.Option(
        None, "--l", help="Coverage layers per scale", callback=validate_coverage_layers
    ),
    heatmap: Path | None = typer.Option(
        None, "--heatmap", help="Also write the normalized vote heatmap"
    ),
    scales: str | None = typer.Option(
        None, "--scales", help="Comma-separated patch sides, e.g. 16,32,64"
    ),
    randomize: bool | None = typer.Option(
        None,
        "--randomize/--no-randomize",
        help="Shift every coverage layer by a random offset",
    ),
    *,
    options: GlobalOptions,
) -> None:
    """
    Refine the foreground mask of one frame with multi-scale patch voting.

    The initial mask comes from a classifier (--didl) or a file (--mask).
    """
    config = options.run_config(
        **{"sbr.l": l, "sbr.scales": scales, "sbr.randomize": randomize}
    )
    start_run_log(out.parent, "refine", config)
    operation = RefineOperation(
        sbr, frames, t, out, didl_path=didl, mask_path=mask, heatmap_path=heatmap
    )
    run_operation(operation, config, options)
