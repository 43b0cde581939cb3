"""Stochastic multi-scale refinement: vote accumulation over coverage tilings."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from lts.constants import FOREGROUND_THRESHOLD, SBR_MICRO_BATCH, SBR_SCALES, Label
from lts.didl.model import DidlModel
from lts.didl.predict import predict_mask
from lts.exceptions import InferenceError, ShapeError
from lts.logging_config import get_logger
from lts.sbr.refinenet import RefineNet
from lts.sbr.sampling import (
    PatchSample,
    coverage_layer,
    crop,
    effective_scale,
    patch_input,
    sample_count,
)
from lts.types.video import FrameSequence, LabelMask, MaskProvenance
from lts.utils.concurrency import BoundedExecutor

logger = get_logger(__name__)


@dataclass
class Heatmap:
    """Per-pixel foreground votes and how many patches covered each pixel."""

    vote_sum: np.ndarray
    stack_count: np.ndarray

    def __post_init__(self) -> None:
        if self.vote_sum.shape != self.stack_count.shape or self.vote_sum.ndim != 2:
            raise ShapeError("Heatmap vote and count grids must be 2-D and share a shape")

    @classmethod
    def zeros(cls, shape: tuple[int, int]) -> "Heatmap":
        return cls(np.zeros(shape, dtype=np.float64), np.zeros(shape, dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.vote_sum.shape[0]), int(self.vote_sum.shape[1]))

    def add_patches(self, samples: Sequence[PatchSample], probabilities: np.ndarray) -> None:
        for sample, prob in zip(samples, probabilities, strict=True):
            rows, cols = sample.window()
            self.vote_sum[rows, cols] += prob
            self.stack_count[rows, cols] += 1

    def __iadd__(self, other: "Heatmap") -> "Heatmap":
        self.vote_sum += other.vote_sum
        self.stack_count += other.stack_count
        return self

    def normalized(self) -> np.ndarray:
        """vote_sum / stack_count, with uncovered pixels at 0."""
        out = np.zeros_like(self.vote_sum)
        np.divide(self.vote_sum, self.stack_count, out=out, where=self.stack_count > 0)
        return out

    def mask(self, threshold: float = FOREGROUND_THRESHOLD) -> LabelMask:
        """Foreground where the normalized heatmap exceeds the threshold."""
        labels = np.where(
            self.normalized() > threshold, Label.FOREGROUND.value, Label.BACKGROUND.value
        ).astype(np.uint8)
        return LabelMask(labels, provenance=MaskProvenance.PREDICTED)


@dataclass(frozen=True)
class _LayerJob:
    scale: int
    layer: int
    offset: tuple[int, int]


def _layer_jobs(
    height: int,
    width: int,
    scales: Sequence[int],
    layers: int,
    seed: int,
    randomize: bool,
) -> list[_LayerJob]:
    rng = np.random.default_rng(seed)
    jobs: list[_LayerJob] = []
    for requested in sorted(scales):
        scale = effective_scale(height, width, requested)
        for layer in range(layers):
            if randomize:
                dy, dx = (int(v) for v in rng.integers(0, scale, size=2))
            else:
                dy, dx = 0, 0
            jobs.append(_LayerJob(scale, layer, (dy, dx)))
    return jobs


def infer_refine(
    net: RefineNet,
    image: np.ndarray,
    foreground: np.ndarray,
    layers: int,
    seed: int,
    scales: Sequence[int] = SBR_SCALES,
    randomize: bool = True,
    threshold: float = FOREGROUND_THRESHOLD,
    micro_batch: int = SBR_MICRO_BATCH,
    executor: BoundedExecutor | None = None,
) -> tuple[Heatmap, LabelMask]:
    """
    Refine a foreground plane by voting over randomly offset patch tilings.

    For each scale, `layers` tilings are drawn, each with its own global
    offset (0 when `randomize` is off). Every patch adds its foreground
    probabilities to the heatmap. Partial results are merged in a fixed
    order, so the result does not depend on the thread count.

    Args:
        net: Trained refine block
        image: (H, W, 3) RGB intensities
        foreground: (H, W) plane to refine
        layers: Coverage layers per scale
        seed: Seed of the tiling offsets
        scales: Patch sides; each is clamped to fit the image
        randomize: Draw random offsets; off gives aligned tilings
        threshold: Heatmap level above which a pixel is foreground
        micro_batch: Patches per forward pass
        executor: Optional executor evaluating layers concurrently

    Returns:
        The heatmap and the thresholded mask

    Raises:
        InferenceError: If `layers` < 1 or the image is too small
    """
    if layers < 1:
        raise InferenceError("l must be ≥ 1")
    if not scales:
        raise InferenceError("At least one patch scale is required")
    height, width = foreground.shape
    tensor = patch_input(image, foreground).astype(net.dtype, copy=False)
    jobs = _layer_jobs(height, width, scales, layers, seed, randomize)

    def run(job: _LayerJob) -> tuple[list[PatchSample], np.ndarray]:
        samples = coverage_layer(height, width, job.scale, job.offset, job.layer)
        tops = np.array([s.top for s in samples])
        lefts = np.array([s.left for s in samples])
        probs = [
            net.foreground_probability(
                crop(tensor, tops[i : i + micro_batch], lefts[i : i + micro_batch], job.scale)
            )
            for i in range(0, len(samples), micro_batch)
        ]
        return samples, np.concatenate(probs)

    heatmap = Heatmap.zeros((height, width))
    width_of_wave = executor.max_workers if executor is not None else 1
    for start in range(0, len(jobs), width_of_wave):
        wave = jobs[start : start + width_of_wave]
        results = executor.map(run, wave) if executor is not None else [run(j) for j in wave]
        for samples, probs in results:
            heatmap.add_patches(samples, probs)

    for requested in sorted(scales):
        scale = effective_scale(height, width, requested)
        logger.debug(
            f"Scale {scale}: nominal sample count {sample_count(height, width, scale, layers)}"
        )
    logger.info(
        f"Refined {height}x{width} frame with {len(jobs)} coverage layers "
        f"(min stack {int(heatmap.stack_count.min())})",
        extra={"layers": len(jobs), "min_stack": int(heatmap.stack_count.min())},
    )
    return heatmap, heatmap.mask(threshold)


def refine_mask(
    net: RefineNet,
    image: np.ndarray,
    mask: LabelMask | np.ndarray,
    layers: int,
    seed: int,
    **kwargs: object,
) -> tuple[Heatmap, LabelMask]:
    """
    Refine any mask, whatever produced it; Other counts as background.

    `kwargs` are passed to `infer_refine`.
    """
    plane = mask.foreground() if isinstance(mask, LabelMask) else np.asarray(mask, dtype=bool)
    return infer_refine(net, image, plane, layers, seed, **kwargs)  # type: ignore[arg-type]


def refine_pipeline(
    didl_model: DidlModel,
    net: RefineNet,
    seq: FrameSequence,
    t: int,
    layers: int,
    seed: int,
    batch: int,
    executor: BoundedExecutor | None = None,
    **kwargs: object,
) -> tuple[LabelMask, Heatmap, LabelMask]:
    """
    Classify frame t, then refine the foreground of that classification.

    Returns:
        The classifier mask, the heatmap and the refined mask
    """
    didl_mask = predict_mask(didl_model, seq, t, batch, executor)
    image = seq.to_rgb().frame(t)
    heatmap, refined = refine_mask(net, image, didl_mask, layers, seed, executor=executor, **kwargs)
    return didl_mask, heatmap, refined
