"""Base types for step-wise pipeline operations."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Generic, TypeVar

from lts.logging_config import get_logger
from lts.types.config import RunConfig

logger = get_logger(__name__)

T = TypeVar("T")


class OperationStatus(str, Enum):
    """Status of an operation execution."""

    SUCCESS = "success"
    FAILURE = "failure"
    SKIPPED = "skipped"


class ExecutableStep(ABC):
    """
    One unit of work inside an operation.

    Steps share data through the dictionary passed to `execute`: each step's
    return value is stored under its name before the next step runs.

    Example:
        >>> class LoadPoolStep(ExecutableStep):
        ...     def __init__(self, path: Path):
        ...         super().__init__("load", "Load histogram pool")
        ...         self.path = path
        ...
        ...     def execute(self, context, results):
        ...         return load_pool(self.path)
    """

    def __init__(self, name: str, description: str, weight: float = 1.0):
        """
        Initialize an executable step.

        Args:
            name: Key of the step result
            description: Human-readable description
            weight: Relative weight for progress calculation
        """
        self.name = name
        self.description = description
        self.weight = weight

    @abstractmethod
    def execute(self, context: OperationContext, results: dict[str, Any]) -> Any:
        """
        Execute this step.

        Args:
            context: Execution context
            results: Results of the steps that already ran, by step name

        Returns:
            Step result (can be any type)
        """

    def should_execute(self, _context: OperationContext, _results: dict[str, Any]) -> bool:
        """Override to skip the step conditionally."""
        return True

    def __str__(self) -> str:
        return self.description


@dataclass(frozen=True)
class OperationContext:
    """Resolved configuration and display flags shared by every step of a run."""

    config: RunConfig
    verbose: bool = False
    metadata: dict[str, Any] = field(default_factory=dict)

    def with_metadata(self, **kwargs: Any) -> OperationContext:
        """Create new context with additional metadata."""
        return replace(self, metadata={**self.metadata, **kwargs})


@dataclass
class OperationResult(Generic[T]):
    """Success, failure or skip of an operation, with its data or error."""

    status: OperationStatus
    data: T | None = None
    error: Exception | None = None
    message: str = ""

    @classmethod
    def success(cls, data: T | None = None, message: str = "") -> OperationResult[T]:
        return cls(status=OperationStatus.SUCCESS, data=data, message=message)

    @classmethod
    def failure(cls, error: Exception, message: str = "") -> OperationResult[T]:
        return cls(status=OperationStatus.FAILURE, error=error, message=message)

    @classmethod
    def skipped(cls, message: str = "") -> OperationResult[T]:
        return cls(status=OperationStatus.SKIPPED, message=message)

    def is_success(self) -> bool:
        return self.status == OperationStatus.SUCCESS

    def is_failure(self) -> bool:
        return self.status == OperationStatus.FAILURE

    def unwrap(self) -> T:
        """
        Get the result data or raise the error.

        Raises:
            ValueError: If result has no data
            Exception: If result contains an error
        """
        if self.error:
            raise self.error
        if self.data is None:
            raise ValueError(f"Operation result has no data: {self.message}")
        return self.data


class Operation(ABC, Generic[T]):
    """A single pipeline stage with a description, validation and execution."""

    @abstractmethod
    def describe(self) -> str:
        """Short imperative description shown in progress output."""

    def validate(self, _context: OperationContext) -> list[str]:
        """
        Check preconditions before anything runs.

        Returns:
            List of validation errors (empty if valid)
        """
        return []

    @abstractmethod
    def execute(self, context: OperationContext) -> OperationResult[T]:
        """Run the operation."""

    def __str__(self) -> str:
        return self.describe()


class SteppedOperation(Operation[T], ABC):
    """
    Operation that declares its steps upfront.

    Subclasses implement `define_steps` and usually `_build_result`, which
    turns the collected step results into the operation's data.

    Example:
        >>> class PruneOperation(SteppedOperation[InstancePool]):
        ...     def describe(self) -> str:
        ...         return "Prune histogram pool"
        ...
        ...     def define_steps(self) -> list[ExecutableStep]:
        ...         return [LoadPoolStep(self.source), PruneStep(), SavePoolStep(self.target)]
    """

    @abstractmethod
    def define_steps(self) -> list[ExecutableStep]:
        """Steps in execution order."""

    def run_step(
        self, step: ExecutableStep, context: OperationContext, results: dict[str, Any]
    ) -> bool:
        """
        Execute one step and record its result.

        Returns:
            False when the step was skipped
        """
        if not step.should_execute(context, results):
            logger.info(f"Skipping step: {step.name}")
            return False
        logger.debug(f"Executing step: {step.name} - {step.description}")
        results[step.name] = step.execute(context, results)
        return True

    def execute(self, context: OperationContext) -> OperationResult[T]:
        results: dict[str, Any] = {}
        try:
            for step in self.define_steps():
                self.run_step(step, context, results)
            return self._build_result(results, context)
        except Exception as e:
            logger.error(
                f"Step execution failed in {self.describe()}: {e}",
                exc_info=True,
                extra={"operation": self.describe()},
            )
            return OperationResult.failure(e, str(e))

    def _build_result(
        self,
        _step_results: dict[str, Any],
        _context: OperationContext,
    ) -> OperationResult[T]:
        return OperationResult.success(None, f"{self.describe()} completed successfully")
