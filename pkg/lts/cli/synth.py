"""Synthetic scene command."""

from pathlib import Path

import typer

from lts.cli.helpers import run_operation
from lts.cli.validators import (
    validate_frame_count,
    validate_height,
    validate_sigma,
    validate_square,
    validate_width,
)
from lts.core.operations import SynthesizeSceneOperation
from lts.utils.cli import GlobalOptions, add_global_options, cli_command, start_run_log
from lts.videoio.synthetic import moving_square_scene


@add_global_options
@cli_command
def synth_command(
    out: Path = typer.Option(..., "--out", help="Scene directory to write"),
    height: int = typer.Option(64, "--height", help="Frame height", callback=validate_height),
    width: int = typer.Option(64, "--width", help="Frame width", callback=validate_width),
    frames: int = typer.Option(
        60, "--frames", help="Number of frames", callback=validate_frame_count
    ),
    sigma: float = typer.Option(
        0.02, "--sigma", help="Standard deviation of pixel noise", callback=validate_sigma
    ),
    square: int = typer.Option(
        10, "--square", help="Side of the moving square", callback=validate_square
    ),
    *,
    options: GlobalOptions,
) -> None:
    """
    Render a noisy scene with a moving square, plus its ground truth.

    Frames go to <out>/input and masks to <out>/groundtruth.
    """
    config = options.run_config()
    if square > min(height, width):
        raise typer.BadParameter(
            f"square must be ≤ {min(height, width)}", param_hint="'--square'"
        )
    start_run_log(out, "synth", config)
    spec = moving_square_scene(height, width, frames, square, sigma, config.seed)
    run_operation(SynthesizeSceneOperation(spec, out), config, options)
