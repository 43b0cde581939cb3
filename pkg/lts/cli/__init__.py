"""Main CLI entry point for LTS."""

import typer

from lts import __version__
from lts.cli.didl import infer_command, train_didl_command
from lts.cli.evaluate import evaluate_command
from lts.cli.histograms import extract_command, prune_command
from lts.cli.sbr import refine_command, train_sbr_command
from lts.cli.synth import synth_command
from lts.cli.verification import gradcheck_command, verify_product_command
from lts.logging_config import console, get_logger

logger = get_logger(__name__)

app = typer.Typer(
    name="lts",
    help="lts: Learn and refine foreground segmentation of videos.",
    no_args_is_help=False,
)

# Register commands
app.command("extract")(extract_command)
app.command("prune")(prune_command)
app.command("train-didl")(train_didl_command)
app.command("infer")(infer_command)
app.command("train-sbr")(train_sbr_command)
app.command("refine")(refine_command)
app.command("verify-product")(verify_product_command)
app.command("gradcheck")(gradcheck_command)
app.command("synth")(synth_command)
app.command("evaluate")(evaluate_command)


@app.callback(invoke_without_command=True)
def callback(
    ctx: typer.Context,
    version: bool = typer.Option(
        False,
        "--version",
        "-v",
        help="Show version and exit",
    ),
) -> None:
    """Learn and refine foreground segmentation of videos."""
    if version:
        console.print(f"lts version {__version__}")
        raise typer.Exit()

    # If no subcommand was provided, show help
    if ctx.invoked_subcommand is None:
        console.print(ctx.get_help())
        raise typer.Exit()


def main(argv: list[str] | None = None) -> int:
    """
    Main entry point.

    Returns:
        Process exit code: 0 on success, 1 on a failed run, 2 on a usage error
    """
    try:
        app(args=argv, prog_name="lts")
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0
