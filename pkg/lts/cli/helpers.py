"""Helper functions shared by the command modules."""

from typing import TypeVar

import typer

from lts.core.operations import Operation, OperationContext, OperationResult, OperationRunner
from lts.types.config import RunConfig
from lts.utils.cli import GlobalOptions

T = TypeVar("T")


def run_operation(
    operation: Operation[T], config: RunConfig, options: GlobalOptions
) -> OperationResult[T]:
    """
    Run an operation and stop the command when it fails.

    Returns:
        The successful result

    Raises:
        typer.Exit: With code 1 if validation or execution failed
    """
    context = OperationContext(config=config, verbose=options.verbose)
    result = OperationRunner(operation).run(context)
    if not result.is_success():
        raise typer.Exit(code=1)
    return result
