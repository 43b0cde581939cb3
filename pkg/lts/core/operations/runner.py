"""Operation runner with progress display and outcome logging."""

from typing import Any, Generic, TypeVar

from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
)

from lts.logging_config import console, get_logger

from .base import (
    ExecutableStep,
    Operation,
    OperationContext,
    OperationResult,
    SteppedOperation,
)

logger = get_logger(__name__)

T = TypeVar("T")


class OperationRunner(Generic[T]):
    """
    Runs an operation with consistent progress output and logging.

    Example:
        >>> runner = OperationRunner(PruneOperation(source, target))
        >>> result = runner.run(OperationContext(config=config))
        >>> if result.is_success():
        ...     print(f"Kept {result.data.size} instances")
    """

    def __init__(
        self,
        operation: Operation[T],
        show_progress: bool = True,
        silent: bool = False,
    ):
        """
        Args:
            operation: Operation to run
            show_progress: Show progress indicator
            silent: Suppress console output
        """
        self.operation = operation
        self.show_progress = show_progress
        self.silent = silent

    def run(self, context: OperationContext) -> OperationResult[T]:
        description = self.operation.describe()
        logger.info(f"Executing operation: {description}", extra={"operation": description})

        validation_errors = self.operation.validate(context)
        if validation_errors:
            error_msg = "; ".join(validation_errors)
            if not self.silent:
                console.print(f"[red]x Validation failed:[/red] {error_msg}")
            logger.error(f"Validation failed for {description}: {error_msg}")
            return OperationResult.failure(ValueError(error_msg), error_msg)

        if (
            self.show_progress
            and not self.silent
            and isinstance(self.operation, SteppedOperation)
        ):
            result = self._execute_stepped_operation(self.operation, context)
        else:
            result = self._execute_operation(context)

        if not self.silent:
            self._display_result(result, description)

        if result.is_success():
            logger.info(
                f"Operation completed successfully: {description}",
                extra={"operation": description, "result_message": result.message},
            )
        elif result.is_failure():
            logger.error(
                f"Operation failed: {description}: {result.message or result.error}",
                extra={"operation": description, "error": str(result.error)},
            )
        return result

    def _execute_stepped_operation(
        self, stepped_op: SteppedOperation[T], context: OperationContext
    ) -> OperationResult[T]:
        steps = stepped_op.define_steps()
        if context.verbose:
            self._display_step_plan(steps)

        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(bar_width=30),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=console,
            transient=not context.verbose,
        ) as progress:
            main_task = progress.add_task(
                stepped_op.describe(), total=sum(step.weight for step in steps)
            )
            results: dict[str, Any] = {}
            try:
                for step in steps:
                    progress.update(
                        main_task, description=f"{stepped_op.describe()} - {step.description}"
                    )
                    stepped_op.run_step(step, context, results)
                    progress.advance(main_task, advance=step.weight)
                progress.update(main_task, description=stepped_op.describe())
                return stepped_op._build_result(results, context)
            except Exception as e:
                logger.debug(f"Step execution failed in {stepped_op.describe()}", exc_info=True)
                return OperationResult.failure(e, str(e))

    def _display_step_plan(self, steps: list[ExecutableStep]) -> None:
        console.print(f"[cyan]Execution plan ({len(steps)} steps):[/cyan]")
        for i, step in enumerate(steps, 1):
            console.print(f"[cyan]  {i}. {step.description}[/cyan]")

    def _execute_operation(self, context: OperationContext) -> OperationResult[T]:
        try:
            return self.operation.execute(context)
        except Exception as e:
            logger.debug(
                f"Unexpected error executing operation: {self.operation.describe()}",
                exc_info=True,
            )
            return OperationResult.failure(e, str(e))

    def _display_result(self, result: OperationResult[T], description: str) -> None:
        if result.is_success():
            console.print(f"[green]+[/green] {result.message or description}")
        elif result.is_failure():
            console.print(f"[red]x[/red] {description}")
            console.print(f"[red]  Error:[/red] {result.message or result.error}")
        else:
            console.print(f"[yellow]-[/yellow] Skipped: {result.message or description}")
