"""Refine-block training and refinement operations."""

from pathlib import Path
from typing import Any

import numpy as np

from lts.core.operations.base import (
    ExecutableStep,
    OperationContext,
    OperationResult,
    SteppedOperation,
)
from lts.core.operations.didl import LoadFramesStep, load_didl_model
from lts.didl.predict import predict_mask
from lts.exceptions import EmptyTrainingSetError, FrameIndexError
from lts.logging_config import get_logger
from lts.nn.checkpoint import load_checkpoint, save_checkpoint
from lts.sbr.inference import Heatmap, refine_mask
from lts.sbr.refinenet import RefineNet, build_refine_net
from lts.sbr.training import TrainingPair, surrogate_pairs, train_sbr
from lts.types.config import RunConfig
from lts.types.video import FrameSequence, LabelMask
from lts.utils.concurrency import BoundedExecutor
from lts.videoio.frames import load_frames
from lts.videoio.masks import load_gt_masks, read_mask, write_heatmap, write_mask

logger = get_logger(__name__)

FRAMES_SUBDIRECTORY = "input"
GT_SUBDIRECTORY = "groundtruth"


def load_refine_net(path: Path, config: RunConfig) -> RefineNet:
    net = build_refine_net(config.seed, config.dtype)
    load_checkpoint(net, path)
    return net


def discover_corpus(root: Path) -> list[Path]:
    """
    Scene folders holding `input/` and `groundtruth/`: `root` itself, or its
    sub-folders up to two levels deep.
    """
    def is_scene(p: Path) -> bool:
        return (p / FRAMES_SUBDIRECTORY).is_dir() and (p / GT_SUBDIRECTORY).is_dir()

    if is_scene(root):
        return [root]
    scenes: list[Path] = []
    for first in sorted(p for p in root.iterdir() if p.is_dir()):
        if is_scene(first):
            scenes.append(first)
            continue
        scenes.extend(second for second in sorted(first.iterdir()) if is_scene(second))
    return scenes


# ============================================================================
# Steps
# ============================================================================


class BuildTrainingPairsStep(ExecutableStep):
    """
    Pair every `frame_stride`-th frame with a foreground plane to refine: the
    classifier's mask when a classifier is given, corrupted ground truth otherwise.
    """

    def __init__(self, corpus: Path, didl_path: Path | None):
        super().__init__("pairs", "Build training pairs", weight=2.0)
        self.corpus = corpus
        self.didl_path = didl_path

    def execute(self, context: OperationContext, _results: dict[str, Any]) -> list[TrainingPair]:
        config = context.config
        scenes = discover_corpus(self.corpus)
        if not scenes:
            raise EmptyTrainingSetError(
                f"No scene with {FRAMES_SUBDIRECTORY}/ and {GT_SUBDIRECTORY}/ under {self.corpus}"
            )
        model = load_didl_model(self.didl_path, config) if self.didl_path else None
        rng = np.random.default_rng(config.seed)
        stride = config.sbr.frame_stride

        pairs: list[TrainingPair] = []
        with BoundedExecutor(config.threads) as executor:
            for scene in scenes:
                seq = load_frames(scene / FRAMES_SUBDIRECTORY, config.histogram.frame_pattern)
                gt = load_gt_masks(
                    scene / GT_SUBDIRECTORY,
                    naming_pattern=config.histogram.gt_pattern,
                    expected_shape=(seq.height, seq.width),
                )
                if model is None:
                    pairs.extend(surrogate_pairs(seq, gt, config.sbr, rng)[::stride])
                    continue
                rgb = seq.to_rgb()
                for t in range(0, seq.frame_count, stride):
                    mask = predict_mask(model, seq, t, config.didl.batch, executor)
                    pairs.append(TrainingPair(rgb.frame(t), mask.foreground(), gt[t]))
        logger.info(
            f"Built {len(pairs)} training pairs from {len(scenes)} scenes",
            extra={"pairs": len(pairs), "scenes": len(scenes), "stride": stride},
        )
        return pairs


class TrainRefineStep(ExecutableStep):
    def __init__(self) -> None:
        super().__init__("trained", "Train refine block", weight=10.0)

    def execute(
        self, context: OperationContext, results: dict[str, Any]
    ) -> tuple[RefineNet, list[float]]:
        config = context.config
        return train_sbr(results["pairs"], config.sbr, config.seed, config.dtype)


class SaveRefineNetStep(ExecutableStep):
    def __init__(self, path: Path):
        super().__init__("saved", f"Write {path.name}")
        self.path = path

    def execute(self, _context: OperationContext, results: dict[str, Any]) -> Path:
        net, _ = results["trained"]
        save_checkpoint(net, self.path)
        return self.path


class LoadRefineNetStep(ExecutableStep):
    def __init__(self, path: Path):
        super().__init__("net", "Load refine block checkpoint")
        self.path = path

    def execute(self, context: OperationContext, _results: dict[str, Any]) -> RefineNet:
        return load_refine_net(self.path, context.config)


class InitialMaskStep(ExecutableStep):
    """The mask to refine: read from a file, or classified from the frames."""

    def __init__(self, t: int, didl_path: Path | None, mask_path: Path | None):
        super().__init__("initial", "Obtain initial mask", weight=3.0)
        self.t = t
        self.didl_path = didl_path
        self.mask_path = mask_path

    def execute(self, context: OperationContext, results: dict[str, Any]) -> LabelMask:
        seq: FrameSequence = results["frames"]
        if not 0 <= self.t < seq.frame_count:
            raise FrameIndexError(f"Frame {self.t} is outside 0..{seq.frame_count - 1}")
        if self.mask_path is not None:
            return read_mask(self.mask_path)
        assert self.didl_path is not None
        model = load_didl_model(self.didl_path, context.config)
        with BoundedExecutor(context.config.threads) as executor:
            return predict_mask(model, seq, self.t, context.config.didl.batch, executor)


class RefineStep(ExecutableStep):
    def __init__(self, t: int):
        super().__init__("refined", "Refine with multi-scale patches", weight=5.0)
        self.t = t

    def execute(
        self, context: OperationContext, results: dict[str, Any]
    ) -> tuple[Heatmap, LabelMask]:
        config = context.config
        image = results["frames"].to_rgb().frame(self.t)
        with BoundedExecutor(config.threads) as executor:
            return refine_mask(
                results["net"],
                image,
                results["initial"],
                config.sbr.l,
                config.seed,
                scales=config.sbr.scales,
                randomize=config.sbr.randomize,
                threshold=config.threshold,
                micro_batch=config.sbr.micro_batch,
                executor=executor,
            )


class WriteRefinedStep(ExecutableStep):
    def __init__(self, output: Path, heatmap_path: Path | None):
        super().__init__("written", f"Write {output.name}")
        self.output = output
        self.heatmap_path = heatmap_path

    def execute(self, _context: OperationContext, results: dict[str, Any]) -> None:
        heatmap, refined = results["refined"]
        write_mask(refined, self.output)
        if self.heatmap_path is not None:
            write_heatmap(heatmap.normalized(), self.heatmap_path)


# ============================================================================
# Operations
# ============================================================================


class TrainSbrOperation(SteppedOperation[list[float]]):
    """Train the refine block on a corpus of scenes and save it."""

    def __init__(self, corpus: Path, output: Path, didl_path: Path | None = None):
        self.corpus = corpus
        self.output = output
        self.didl_path = didl_path

    def describe(self) -> str:
        return "Train refine block"

    def validate(self, _context: OperationContext) -> list[str]:
        if not self.corpus.is_dir():
            return [f"Corpus directory not found: {self.corpus}"]
        return []

    def define_steps(self) -> list[ExecutableStep]:
        return [
            BuildTrainingPairsStep(self.corpus, self.didl_path),
            TrainRefineStep(),
            SaveRefineNetStep(self.output),
        ]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[list[float]]:
        _, losses = step_results["trained"]
        tail = f", final loss {losses[-1]:.6f}" if losses else ""
        return OperationResult.success(
            losses, f"Trained for {len(losses)} epochs{tail}; wrote {self.output}"
        )


class RefineOperation(SteppedOperation[tuple[Heatmap, LabelMask]]):
    """Refine the mask of one frame and write it, with an optional heatmap image."""

    def __init__(
        self,
        sbr_path: Path,
        frames_dir: Path,
        t: int,
        output: Path,
        didl_path: Path | None = None,
        mask_path: Path | None = None,
        heatmap_path: Path | None = None,
    ):
        self.sbr_path = sbr_path
        self.frames_dir = frames_dir
        self.t = t
        self.output = output
        self.didl_path = didl_path
        self.mask_path = mask_path
        self.heatmap_path = heatmap_path

    def describe(self) -> str:
        return "Refine foreground mask"

    def validate(self, _context: OperationContext) -> list[str]:
        if (self.didl_path is None) == (self.mask_path is None):
            return ["Give exactly one of a classifier checkpoint or an input mask"]
        return []

    def define_steps(self) -> list[ExecutableStep]:
        return [
            LoadRefineNetStep(self.sbr_path),
            LoadFramesStep(self.frames_dir),
            InitialMaskStep(self.t, self.didl_path, self.mask_path),
            RefineStep(self.t),
            WriteRefinedStep(self.output, self.heatmap_path),
        ]

    def _build_result(
        self, step_results: dict[str, Any], _context: OperationContext
    ) -> OperationResult[tuple[Heatmap, LabelMask]]:
        heatmap, refined = step_results["refined"]
        fraction = refined.foreground().mean()
        return OperationResult.success(
            (heatmap, refined), f"Wrote {self.output} ({fraction:.2%} foreground)"
        )
