"""Rich tables for command reports."""

from collections.abc import Sequence

from rich import box
from rich.table import Table

from lts.core.services.gradients import GradcheckOutcome
from lts.didl.training import TrainReport
from lts.distlayer.montecarlo import DivergenceReport, ZeroBinReport
from lts.evaluation.metrics import Summary, VideoScore
from lts.logging_config import console


def print_zero_bin_reports(zero_bin: ZeroBinReport, divergence: DivergenceReport) -> None:
    table = Table(title="Product layer verification", box=box.ROUNDED)
    table.add_column("Quantity", style="cyan", no_wrap=True)
    table.add_column("Value", justify="right")

    table.add_row("samples", f"{zero_bin.samples:,}")
    table.add_row("seed", str(zero_bin.seed))
    table.add_row("f_X(0)", f"{zero_bin.x_zero_density:.5f}")
    table.add_row("E(1/|W|)", f"{zero_bin.expected_inverse:.5f}")
    table.add_row("measured f_Z(0)", f"{zero_bin.measured_zero_density:.5f}")
    table.add_row("predicted f_Z(0)", f"{zero_bin.predicted_zero_density:.5f}")
    table.add_row("relative error", f"{zero_bin.relative_error:.2%}")
    table.add_section()
    table.add_row("divergent f_Z(0)", f"{divergence.zero_density:.5f}")
    table.add_row("median bin density", f"{divergence.median_density:.5f}")
    table.add_row("peak ratio", f"{divergence.peak_ratio:.2f}")
    console.print(table)


def print_gradcheck_outcomes(outcomes: Sequence[GradcheckOutcome]) -> None:
    table = Table(title="Gradient checks", box=box.ROUNDED)
    table.add_column("Case", style="cyan", no_wrap=True)
    table.add_column("Entries", justify="right")
    table.add_column("Max rel. error", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Status", no_wrap=True)
    for outcome in outcomes:
        status = "[green]+ ok[/green]" if outcome.passed else "[red]x failed[/red]"
        table.add_row(
            outcome.name,
            str(outcome.result.checked_entries),
            f"{outcome.result.max_relative_error:.2e}",
            f"{outcome.tolerance:.0e}",
            status,
        )
    console.print(table)


def print_train_report(report: TrainReport) -> None:
    table = Table(title="Defect iterations", box=box.ROUNDED)
    table.add_column("Iteration", justify="right")
    table.add_column("Subset", justify="right")
    table.add_column("Accuracy", justify="right")
    table.add_column("Defects", justify="right")
    for row in report.rows():
        table.add_row(
            str(row["iteration"]),
            f"{row['subset_size']:,}",
            f"{row['accuracy']:.4f}",
            f"{row['defects']:,}",
        )
    console.print(table)


def print_evaluation(scores: Sequence[VideoScore], summary: Summary) -> None:
    table = Table(title="F-measure", box=box.ROUNDED)
    table.add_column("Video", style="cyan", no_wrap=True)
    table.add_column("Frames", justify="right")
    table.add_column("F", justify="right")
    for score in scores:
        table.add_row(score.video, str(score.frames_scored), f"{score.f_measure:.4f}")
    table.add_section()
    for category, mean in summary.category_means.items():
        table.add_row(f"[dim]{category} (mean)[/dim]", "", f"{mean:.4f}")
    table.add_row("[bold]overall[/bold]", "", f"[bold]{summary.overall:.4f}[/bold]")
    console.print(table)
