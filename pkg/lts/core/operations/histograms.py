"""Histogram pool extraction and pruning operations."""

from pathlib import Path
from typing import Any

from lts.core.operations.base import (
    ExecutableStep,
    OperationContext,
    OperationResult,
    SteppedOperation,
)
from lts.hist.cache import load_pool, save_pool
from lts.hist.extract import extract_pool
from lts.hist.prune import prune_similar
from lts.logging_config import get_logger
from lts.types.histogram import InstancePool
from lts.utils.concurrency import BoundedExecutor
from lts.videoio.frames import load_frames
from lts.videoio.masks import load_gt_masks

logger = get_logger(__name__)


# ============================================================================
# Steps
# ============================================================================


class LoadVideoStep(ExecutableStep):
    """Load frames and their ground-truth masks."""

    def __init__(self, frames_dir: Path, gt_dir: Path):
        super().__init__("video", "Load frames and ground truth")
        self.frames_dir = frames_dir
        self.gt_dir = gt_dir

    def execute(self, context: OperationContext, _results: dict[str, Any]) -> Any:
        settings = context.config.histogram
        seq = load_frames(self.frames_dir, settings.frame_pattern)
        gt = load_gt_masks(
            self.gt_dir,
            naming_pattern=settings.gt_pattern,
            expected_shape=(seq.height, seq.width),
        )
        return seq, gt


class ExtractPoolStep(ExecutableStep):
    def __init__(self) -> None:
        super().__init__("pool", "Extract temporal histograms", weight=3.0)

    def execute(self, context: OperationContext, results: dict[str, Any]) -> InstancePool:
        seq, gt = results["video"]
        return extract_pool(seq, gt, context.config.histogram.stride)


class LoadPoolStep(ExecutableStep):
    def __init__(self, path: Path):
        super().__init__("pool", "Load histogram pool")
        self.path = path

    def execute(self, _context: OperationContext, _results: dict[str, Any]) -> InstancePool:
        return load_pool(self.path)


class PrunePoolStep(ExecutableStep):
    def __init__(self, by_label: bool):
        super().__init__("pruned", "Prune near-duplicate histograms", weight=3.0)
        self.by_label = by_label

    def execute(self, context: OperationContext, results: dict[str, Any]) -> InstancePool:
        with BoundedExecutor(context.config.threads) as executor:
            return prune_similar(
                results["pool"], context.config.histogram.tau, self.by_label, executor
            )


class SavePoolStep(ExecutableStep):
    def __init__(self, source: str, path: Path):
        super().__init__(f"saved_{source}", f"Write histogram cache {path.name}")
        self.source = source
        self.path = path

    def execute(self, _context: OperationContext, results: dict[str, Any]) -> Path:
        save_pool(results[self.source], self.path)
        return self.path


def _describe_pool(pool: InstancePool) -> str:
    counts = ", ".join(f"{label.name.lower()} {n}" for label, n in pool.counts().items())
    return f"{pool.size} instances ({counts})"


# ============================================================================
# Operations
# ============================================================================


class ExtractHistogramsOperation(SteppedOperation[InstancePool]):
    """Build a labeled histogram pool from a video and write it to a cache file."""

    def __init__(self, frames_dir: Path, gt_dir: Path, output: Path):
        self.frames_dir = frames_dir
        self.gt_dir = gt_dir
        self.output = output

    def describe(self) -> str:
        return "Extract histogram pool"

    def define_steps(self) -> list[ExecutableStep]:
        return [
            LoadVideoStep(self.frames_dir, self.gt_dir),
            ExtractPoolStep(),
            SavePoolStep("pool", self.output),
        ]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[InstancePool]:
        pool = step_results["pool"]
        return OperationResult.success(pool, f"Wrote {_describe_pool(pool)} to {self.output}")


class PruneHistogramsOperation(SteppedOperation[InstancePool]):
    """Drop instances closer than tau to an earlier kept instance."""

    def __init__(self, source: Path, output: Path, by_label: bool = True):
        self.source = source
        self.output = output
        self.by_label = by_label

    def describe(self) -> str:
        return "Prune histogram pool"

    def define_steps(self) -> list[ExecutableStep]:
        return [
            LoadPoolStep(self.source),
            PrunePoolStep(self.by_label),
            SavePoolStep("pruned", self.output),
        ]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[InstancePool]:
        before: InstancePool = step_results["pool"]
        after: InstancePool = step_results["pruned"]
        return OperationResult.success(
            after, f"Kept {_describe_pool(after)} of {before.size} in {self.output}"
        )
