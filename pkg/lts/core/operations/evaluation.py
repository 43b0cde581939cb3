"""Scoring operation over a tree of predicted masks."""

from pathlib import Path
from typing import Any

from lts.constants import DEFAULT_PRED_PATTERN
from lts.core.operations.base import (
    ExecutableStep,
    OperationContext,
    OperationResult,
    SteppedOperation,
)
from lts.evaluation.metrics import Summary, VideoScore
from lts.evaluation.report import evaluate, write_report
from lts.utils.concurrency import BoundedExecutor


class ScoreVideosStep(ExecutableStep):
    def __init__(self, pred_root: Path, gt_root: Path, pred_pattern: str):
        super().__init__("scored", "Score videos", weight=3.0)
        self.pred_root = pred_root
        self.gt_root = gt_root
        self.pred_pattern = pred_pattern

    def execute(
        self, context: OperationContext, _results: dict[str, Any]
    ) -> tuple[list[VideoScore], Summary]:
        with BoundedExecutor(context.config.threads) as executor:
            return evaluate(
                self.pred_root,
                self.gt_root,
                pred_pattern=self.pred_pattern,
                gt_pattern=context.config.histogram.gt_pattern,
                executor=executor,
            )


class WriteReportStep(ExecutableStep):
    def __init__(self, report: Path):
        super().__init__("summary_path", f"Write {report.name}")
        self.report = report

    def execute(self, _context: OperationContext, results: dict[str, Any]) -> Path:
        scores, summary = results["scored"]
        return write_report(scores, summary, self.report)


class EvaluateOperation(SteppedOperation[tuple[list[VideoScore], Summary]]):
    """Score predicted masks against ground truth and write the CSV reports."""

    def __init__(
        self,
        pred_root: Path,
        gt_root: Path,
        report: Path,
        pred_pattern: str = DEFAULT_PRED_PATTERN,
    ):
        self.pred_root = pred_root
        self.gt_root = gt_root
        self.report = report
        self.pred_pattern = pred_pattern

    def describe(self) -> str:
        return "Evaluate segmentation"

    def validate(self, _context: OperationContext) -> list[str]:
        errors = []
        if not self.pred_root.is_dir():
            errors.append(f"Prediction directory not found: {self.pred_root}")
        if not self.gt_root.is_dir():
            errors.append(f"Ground-truth directory not found: {self.gt_root}")
        return errors

    def define_steps(self) -> list[ExecutableStep]:
        return [
            ScoreVideosStep(self.pred_root, self.gt_root, self.pred_pattern),
            WriteReportStep(self.report),
        ]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[tuple[list[VideoScore], Summary]]:
        scores, summary = step_results["scored"]
        return OperationResult.success(
            (scores, summary),
            f"Overall F-measure {summary.overall:.4f} over {len(scores)} videos; "
            f"wrote {self.report} and {step_results['summary_path']}",
        )
