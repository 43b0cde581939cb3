"""Histogram extract and prune commands."""

from pathlib import Path

import typer

from lts.cli.helpers import run_operation
from lts.cli.validators import (
    validate_existing_dir,
    validate_existing_file,
    validate_stride,
    validate_tau,
)
from lts.core.operations import ExtractHistogramsOperation, PruneHistogramsOperation
from lts.utils.cli import GlobalOptions, add_global_options, cli_command, start_run_log


@add_global_options
@cli_command
def extract_command(
    frames: Path = typer.Option(
        ..., "--frames", help="Directory of input frames", callback=validate_existing_dir
    ),
    gt: Path = typer.Option(
        ..., "--gt", help="Directory of ground-truth masks", callback=validate_existing_dir
    ),
    out: Path = typer.Option(..., "--out", help="Histogram pool file to write"),
    stride: int | None = typer.Option(
        None, "--stride", help="Use every N-th frame", callback=validate_stride
    ),
    *,
    options: GlobalOptions,
) -> None:
    """
    Build one labeled set of difference histograms per pixel of a video.
    """
    config = options.run_config(**{"histogram.stride": stride})
    start_run_log(out.parent, "extract", config)
    run_operation(ExtractHistogramsOperation(frames, gt, out), config, options)


@add_global_options
@cli_command
def prune_command(
    source: Path = typer.Option(
        ..., "--in", help="Histogram pool file to prune", callback=validate_existing_file
    ),
    out: Path = typer.Option(..., "--out", help="Pruned pool file to write"),
    tau: float | None = typer.Option(
        None, "--tau", help="Minimum distance between kept instances", callback=validate_tau
    ),
    by_label: bool = typer.Option(
        True,
        "--by-label/--global",
        help="Prune each label separately, or across the whole pool",
    ),
    *,
    options: GlobalOptions,
) -> None:
    """
    Remove near-duplicate histogram instances.

    An instance is kept only if no earlier kept instance lies within tau of it.
    """
    config = options.run_config(**{"histogram.tau": tau})
    start_run_log(out.parent, "prune", config)
    run_operation(PruneHistogramsOperation(source, out, by_label=by_label), config, options)
