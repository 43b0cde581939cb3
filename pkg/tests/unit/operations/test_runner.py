"""Tests for the operation runner."""

from typing import Any

import pytest

from lts.core.operations.base import (
    ExecutableStep,
    Operation,
    OperationContext,
    OperationResult,
    OperationStatus,
    SteppedOperation,
)
from lts.core.operations.runner import OperationRunner


class SimpleOperation(Operation[str]):
    """A simple test operation that returns success."""

    def describe(self) -> str:
        return "Simple test operation"

    def execute(self, context: OperationContext) -> OperationResult[str]:
        return OperationResult.success("Success!", "Operation completed successfully")


class FailingOperation(Operation[str]):
    def describe(self) -> str:
        return "Failing test operation"

    def execute(self, context: OperationContext) -> OperationResult[str]:
        return OperationResult.failure(RuntimeError("boom"), "Operation failed")


class RaisingOperation(Operation[str]):
    def describe(self) -> str:
        return "Raising test operation"

    def execute(self, context: OperationContext) -> OperationResult[str]:
        raise RuntimeError("unexpected")


class ValidatingOperation(Operation[str]):
    """An operation with validation errors."""

    def describe(self) -> str:
        return "Validating operation"

    def validate(self, context: OperationContext) -> list[str]:
        return ["Validation error 1", "Validation error 2"]

    def execute(self, context: OperationContext) -> OperationResult[str]:
        return OperationResult.success("Should not reach here")


class MockStep(ExecutableStep):
    """Records the results it saw and returns its own name."""

    def __init__(self, step_name: str, should_fail: bool = False, skip: bool = False):
        super().__init__(step_name, f"Execute {step_name}")
        self.should_fail = should_fail
        self.skip = skip
        self.seen: list[str] = []

    def execute(self, context: OperationContext, results: dict[str, Any]) -> str:
        self.seen = list(results)
        if self.should_fail:
            raise ValueError(f"Step {self.name} failed")
        return f"Result from {self.name}"

    def should_execute(self, _context: OperationContext, _results: dict[str, Any]) -> bool:
        return not self.skip


class SimpleSteppedOperation(SteppedOperation[str]):
    def __init__(self, steps: list[ExecutableStep]):
        self.steps_to_execute = steps

    def describe(self) -> str:
        return "Simple stepped operation"

    def define_steps(self) -> list[ExecutableStep]:
        return self.steps_to_execute

    def _build_result(
        self, step_results: dict[str, Any], context: OperationContext
    ) -> OperationResult[str]:
        return OperationResult.success(",".join(step_results), "Stepped operation done")


@pytest.fixture
def context(run_config) -> OperationContext:
    return OperationContext(config=run_config)


class TestOperationRunner:
    def test_run_simple_operation_success(self, context):
        result = OperationRunner(SimpleOperation(), silent=True).run(context)

        assert result.is_success()
        assert result.data == "Success!"
        assert result.status == OperationStatus.SUCCESS

    def test_run_failing_operation(self, context):
        result = OperationRunner(FailingOperation(), silent=True).run(context)

        assert result.is_failure()
        assert not result.is_success()

    def test_unexpected_exception_becomes_failure(self, context):
        result = OperationRunner(RaisingOperation(), silent=True).run(context)

        assert result.is_failure()
        assert isinstance(result.error, RuntimeError)

    def test_validation_errors_prevent_execution(self, context):
        result = OperationRunner(ValidatingOperation(), silent=True).run(context)

        assert result.is_failure()
        assert result.message == "Validation error 1; Validation error 2"

    @pytest.mark.parametrize("silent", [True, False])
    def test_stepped_operation_passes_results_forward(self, context, silent):
        steps = [MockStep("step1"), MockStep("step2"), MockStep("step3")]

        result = OperationRunner(SimpleSteppedOperation(steps), silent=silent).run(context)

        assert result.data == "step1,step2,step3"
        assert steps[2].seen == ["step1", "step2"]

    def test_stepped_operation_with_failing_step(self, context):
        steps = [MockStep("step1"), MockStep("step2", should_fail=True), MockStep("step3")]

        result = OperationRunner(SimpleSteppedOperation(steps), silent=True).run(context)

        assert result.is_failure()
        assert "step2 failed" in result.message
        assert steps[2].seen == []

    def test_skipped_step_leaves_no_result(self, context):
        steps = [MockStep("step1"), MockStep("step2", skip=True), MockStep("step3")]

        result = OperationRunner(SimpleSteppedOperation(steps), silent=True).run(context)

        assert result.data == "step1,step3"


class TestOperationResult:
    def test_status_checks(self):
        success = OperationResult.success("data", "Success message")
        failure = OperationResult.failure(ValueError("Failure message"))
        skipped = OperationResult.skipped("Skipped message")

        assert success.is_success() and not success.is_failure()
        assert failure.is_failure() and not failure.is_success()
        assert skipped.status == OperationStatus.SKIPPED
        assert not skipped.is_success() and not skipped.is_failure()

    def test_unwrap(self):
        assert OperationResult.success("test_data").unwrap() == "test_data"

        with pytest.raises(ValueError, match="Failure message"):
            OperationResult.failure(ValueError("Failure message")).unwrap()
        with pytest.raises(ValueError, match="no data"):
            OperationResult.success(None, "empty").unwrap()

    def test_context_metadata(self, context):
        extended = context.with_metadata(frame=3)

        assert extended.metadata == {"frame": 3}
        assert context.metadata == {}
        assert extended.config is context.config
