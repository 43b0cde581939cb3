"""Synthetic scene generation operation."""

from pathlib import Path
from typing import Any

from lts.core.operations.base import (
    ExecutableStep,
    OperationContext,
    OperationResult,
    SteppedOperation,
)
from lts.types.video import FrameSequence, LabelMask, SyntheticSceneSpec
from lts.videoio.synthetic import generate_synthetic, write_synthetic_scene


class RenderSceneStep(ExecutableStep):
    def __init__(self, spec: SyntheticSceneSpec):
        super().__init__("scene", "Render frames and ground truth", weight=2.0)
        self.spec = spec

    def execute(
        self, _context: OperationContext, _results: dict[str, Any]
    ) -> tuple[FrameSequence, list[LabelMask]]:
        return generate_synthetic(self.spec)


class WriteSceneStep(ExecutableStep):
    def __init__(self, out_dir: Path):
        super().__init__("written", f"Write scene to {out_dir}")
        self.out_dir = out_dir

    def execute(self, context: OperationContext, results: dict[str, Any]) -> tuple[Path, Path]:
        seq, masks = results["scene"]
        settings = context.config.histogram
        return write_synthetic_scene(
            seq, masks, self.out_dir, settings.frame_pattern, settings.gt_pattern
        )


class SynthesizeSceneOperation(SteppedOperation[tuple[Path, Path]]):
    """Render a synthetic scene and write its frames and ground-truth masks."""

    def __init__(self, spec: SyntheticSceneSpec, out_dir: Path):
        self.spec = spec
        self.out_dir = out_dir

    def describe(self) -> str:
        return "Generate synthetic scene"

    def define_steps(self) -> list[ExecutableStep]:
        return [RenderSceneStep(self.spec), WriteSceneStep(self.out_dir)]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[tuple[Path, Path]]:
        frames_dir, gt_dir = step_results["written"]
        return OperationResult.success(
            (frames_dir, gt_dir),
            f"Wrote {self.spec.frame_count} frames to {frames_dir} and masks to {gt_dir}",
        )
