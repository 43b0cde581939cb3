"""Classifier training and per-frame inference operations."""

from pathlib import Path
from typing import Any

from lts.core.operations.base import (
    ExecutableStep,
    OperationContext,
    OperationResult,
    SteppedOperation,
)
from lts.core.operations.histograms import LoadPoolStep
from lts.didl.model import DidlModel, build_model
from lts.didl.predict import predict_mask
from lts.didl.training import TrainReport, defect_iterate
from lts.logging_config import get_logger
from lts.nn.checkpoint import load_checkpoint, save_checkpoint
from lts.types.config import RunConfig
from lts.types.video import FrameSequence, LabelMask
from lts.utils.concurrency import BoundedExecutor
from lts.videoio.frames import load_frames
from lts.videoio.masks import write_mask

logger = get_logger(__name__)


def load_didl_model(path: Path, config: RunConfig) -> DidlModel:
    """A model with the configured architecture and the checkpoint's parameters."""
    model = build_model(config.seed, config.didl, config.dtype)
    load_checkpoint(model, path)
    return model


# ============================================================================
# Steps
# ============================================================================


class DefectIterationStep(ExecutableStep):
    def __init__(self) -> None:
        super().__init__("trained", "Train with defect iterations", weight=10.0)

    def execute(
        self, context: OperationContext, results: dict[str, Any]
    ) -> tuple[DidlModel, TrainReport]:
        config = context.config
        with BoundedExecutor(config.threads) as executor:
            return defect_iterate(
                results["pool"], config.didl, config.seed, config.dtype, executor
            )


class SaveModelStep(ExecutableStep):
    def __init__(self, path: Path, report_path: Path):
        super().__init__("saved", f"Write {path.name} and {report_path.name}")
        self.path = path
        self.report_path = report_path

    def execute(self, _context: OperationContext, results: dict[str, Any]) -> None:
        model, report = results["trained"]
        save_checkpoint(model, self.path)
        report.write_csv(self.report_path)


class LoadModelStep(ExecutableStep):
    def __init__(self, path: Path):
        super().__init__("model", "Load classifier checkpoint")
        self.path = path

    def execute(self, context: OperationContext, _results: dict[str, Any]) -> DidlModel:
        return load_didl_model(self.path, context.config)


class LoadFramesStep(ExecutableStep):
    def __init__(self, frames_dir: Path):
        super().__init__("frames", "Load frames")
        self.frames_dir = frames_dir

    def execute(self, context: OperationContext, _results: dict[str, Any]) -> FrameSequence:
        return load_frames(self.frames_dir, context.config.histogram.frame_pattern)


class PredictMaskStep(ExecutableStep):
    def __init__(self, t: int):
        super().__init__("mask", f"Classify pixels of frame {t}", weight=3.0)
        self.t = t

    def execute(self, context: OperationContext, results: dict[str, Any]) -> LabelMask:
        with BoundedExecutor(context.config.threads) as executor:
            return predict_mask(
                results["model"], results["frames"], self.t, context.config.didl.batch, executor
            )


class WriteMaskStep(ExecutableStep):
    def __init__(self, source: str, path: Path):
        super().__init__(f"written_{source}", f"Write {path.name}")
        self.source = source
        self.path = path

    def execute(self, _context: OperationContext, results: dict[str, Any]) -> Path:
        write_mask(results[self.source], self.path)
        return self.path


# ============================================================================
# Operations
# ============================================================================


class TrainDidlOperation(SteppedOperation[TrainReport]):
    """Train the classifier on a histogram pool and save it with its report."""

    def __init__(self, pool_path: Path, output: Path, report_path: Path):
        self.pool_path = pool_path
        self.output = output
        self.report_path = report_path

    def describe(self) -> str:
        return "Train classifier"

    def validate(self, _context: OperationContext) -> list[str]:
        if not self.pool_path.is_file():
            return [f"Histogram pool not found: {self.pool_path}"]
        return []

    def define_steps(self) -> list[ExecutableStep]:
        return [
            LoadPoolStep(self.pool_path),
            DefectIterationStep(),
            SaveModelStep(self.output, self.report_path),
        ]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[TrainReport]:
        _, report = step_results["trained"]
        return OperationResult.success(
            report,
            f"Trained for {report.iterations} iterations, final accuracy "
            f"{report.accuracies[-1]:.4f}; wrote {self.output}",
        )


class InferMaskOperation(SteppedOperation[LabelMask]):
    """Classify every pixel of one frame and write the mask."""

    def __init__(self, model_path: Path, frames_dir: Path, t: int, output: Path):
        self.model_path = model_path
        self.frames_dir = frames_dir
        self.t = t
        self.output = output

    def describe(self) -> str:
        return "Infer foreground mask"

    def define_steps(self) -> list[ExecutableStep]:
        return [
            LoadModelStep(self.model_path),
            LoadFramesStep(self.frames_dir),
            PredictMaskStep(self.t),
            WriteMaskStep("mask", self.output),
        ]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[LabelMask]:
        mask: LabelMask = step_results["mask"]
        fraction = mask.foreground().mean()
        return OperationResult.success(
            mask, f"Wrote {self.output} ({fraction:.2%} foreground)"
        )
