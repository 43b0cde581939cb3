"""Numerical verification operations: product-layer Monte Carlo and gradient checks."""

from pathlib import Path
from typing import Any

from pydantic import BaseModel

from lts.core.operations.base import (
    ExecutableStep,
    OperationContext,
    OperationResult,
    OperationStatus,
    SteppedOperation,
)
from lts.core.services.gradients import GradcheckOutcome, run_gradcheck_suite
from lts.distlayer.montecarlo import (
    DivergenceReport,
    ZeroBinReport,
    divergence_check,
    verify_zero_bin_rule,
    write_density_csv,
)
from lts.exceptions import ValidationError
from lts.logging_config import get_logger

logger = get_logger(__name__)

ZERO_BIN_CSV = "zero_bin_product.csv"
DIVERGENCE_CSV = "divergent_product.csv"
REPORT_JSON = "verification.json"


class VerificationReport(BaseModel):
    zero_bin: ZeroBinReport
    divergence: DivergenceReport

    class Config:
        frozen = True


# ============================================================================
# Steps
# ============================================================================


class ZeroBinStep(ExecutableStep):
    def __init__(self, samples: int):
        super().__init__("zero_bin", "Sample N(0,1) x bimodal product", weight=2.0)
        self.samples = samples

    def execute(self, context: OperationContext, _results: dict[str, Any]) -> Any:
        return verify_zero_bin_rule(self.samples, context.config.seed)


class DivergenceStep(ExecutableStep):
    def __init__(self, samples: int):
        super().__init__("divergence", "Sample N(0,1) x N(0,1) product")
        self.samples = samples

    def execute(self, context: OperationContext, _results: dict[str, Any]) -> Any:
        return divergence_check(self.samples, context.config.seed)


class WriteVerificationStep(ExecutableStep):
    def __init__(self, out_dir: Path):
        super().__init__("report", f"Write densities to {out_dir}")
        self.out_dir = out_dir

    def execute(self, _context: OperationContext, results: dict[str, Any]) -> VerificationReport:
        zero_bin, zero_bin_density = results["zero_bin"]
        divergence, divergence_density = results["divergence"]
        self.out_dir.mkdir(parents=True, exist_ok=True)
        write_density_csv(self.out_dir / ZERO_BIN_CSV, zero_bin_density)
        write_density_csv(self.out_dir / DIVERGENCE_CSV, divergence_density)
        report = VerificationReport(zero_bin=zero_bin, divergence=divergence)
        (self.out_dir / REPORT_JSON).write_text(report.model_dump_json(indent=2) + "\n")
        return report


class GradcheckStep(ExecutableStep):
    def __init__(self) -> None:
        super().__init__("outcomes", "Compare analytic and numeric gradients", weight=5.0)

    def execute(
        self, context: OperationContext, _results: dict[str, Any]
    ) -> list[GradcheckOutcome]:
        return run_gradcheck_suite(context.config.seed)


# ============================================================================
# Operations
# ============================================================================


class VerifyProductOperation(SteppedOperation[VerificationReport]):
    """Reproduce the zero-bin and divergence experiments by sampling."""

    def __init__(self, samples: int, out_dir: Path):
        self.samples = samples
        self.out_dir = out_dir

    def describe(self) -> str:
        return "Verify product layer"

    def validate(self, _context: OperationContext) -> list[str]:
        return [] if self.samples >= 1 else ["samples must be ≥ 1"]

    def define_steps(self) -> list[ExecutableStep]:
        return [
            ZeroBinStep(self.samples),
            DivergenceStep(self.samples),
            WriteVerificationStep(self.out_dir),
        ]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[VerificationReport]:
        report: VerificationReport = step_results["report"]
        return OperationResult.success(
            report,
            f"Zero bin within {report.zero_bin.relative_error:.2%} of prediction; "
            f"wrote densities to {self.out_dir}",
        )


class GradcheckOperation(SteppedOperation[list[GradcheckOutcome]]):
    """Central-difference checks of every layer and both tiny networks."""

    def describe(self) -> str:
        return "Check gradients"

    def define_steps(self) -> list[ExecutableStep]:
        return [GradcheckStep()]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[list[GradcheckOutcome]]:
        outcomes: list[GradcheckOutcome] = step_results["outcomes"]
        failed = [o.name for o in outcomes if not o.passed]
        if failed:
            return OperationResult(
                status=OperationStatus.FAILURE,
                data=outcomes,
                error=ValidationError(f"Gradient check failed for: {', '.join(failed)}"),
                message=f"{len(failed)} of {len(outcomes)} gradient checks failed",
            )
        return OperationResult.success(outcomes, f"All {len(outcomes)} gradient checks passed")
