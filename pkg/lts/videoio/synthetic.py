"""Synthetic scenes with exact ground truth."""

from pathlib import Path

import numpy as np

from lts.constants import DEFAULT_FRAME_PATTERN, DEFAULT_GT_PATTERN, GT_WRITE_VALUES, Label
from lts.logging_config import get_logger
from lts.types.video import (
    FrameSequence,
    LabelMask,
    MaskProvenance,
    SyntheticObject,
    SyntheticSceneSpec,
)
from lts.videoio.frames import write_frames
from lts.videoio.masks import write_mask

logger = get_logger(__name__)


def object_footprint(obj: SyntheticObject, t: int, height: int, width: int) -> tuple[slice, slice]:
    """Rows and columns covered by an object at frame t, clipped to the canvas."""
    top, left = obj.position(t)
    rows = slice(min(max(top, 0), height), min(max(top + obj.height, 0), height))
    cols = slice(min(max(left, 0), width), min(max(left + obj.width, 0), width))
    return rows, cols


def generate_synthetic(spec: SyntheticSceneSpec) -> tuple[FrameSequence, list[LabelMask]]:
    """
    Render a scene of moving rectangles over a flat background.

    Objects are painted in list order, later ones on top. Noise is additive
    Gaussian, clamped to [0, 1]; the output is a pure function of the spec.

    Returns:
        RGB frames and one ground-truth mask per frame
    """
    h, w, t_count = spec.height, spec.width, spec.frame_count
    frames = np.empty((t_count, h, w, 3), dtype=np.float64)
    frames[:] = np.asarray(spec.background, dtype=np.float64)
    masks: list[LabelMask] = []

    for t in range(t_count):
        labels = np.full((h, w), Label.BACKGROUND.value, dtype=np.uint8)
        for obj in spec.objects:
            rows, cols = object_footprint(obj, t, h, w)
            frames[t, rows, cols, :] = np.asarray(obj.intensity, dtype=np.float64)
            labels[rows, cols] = Label.FOREGROUND.value
        masks.append(LabelMask(labels, MaskProvenance.GROUND_TRUTH))

    if spec.sigma > 0:
        rng = np.random.default_rng(spec.seed)
        frames += rng.normal(0.0, spec.sigma, size=frames.shape)
        np.clip(frames, 0.0, 1.0, out=frames)

    logger.debug(
        f"Generated synthetic scene {h}x{w}x{t_count} with {len(spec.objects)} objects",
        extra={"height": h, "width": w, "frames": t_count, "seed": spec.seed},
    )
    return FrameSequence(frames.astype(np.float32)), masks


def moving_square_scene(
    height: int = 64,
    width: int = 64,
    frame_count: int = 60,
    side: int = 10,
    sigma: float = 0.02,
    seed: int = 0,
) -> SyntheticSceneSpec:
    """A bright square crossing a dark background along the diagonal."""
    travel = max(1, min(height, width) - side)
    speed = travel / max(1, frame_count - 1)
    return SyntheticSceneSpec(
        height=height,
        width=width,
        frame_count=frame_count,
        background=(0.2, 0.25, 0.3),
        objects=[
            SyntheticObject(
                top=0.0,
                left=0.0,
                height=side,
                width=side,
                velocity=(speed, speed),
                intensity=(0.9, 0.8, 0.7),
            )
        ],
        sigma=sigma,
        seed=seed,
    )


def write_synthetic_scene(
    seq: FrameSequence,
    masks: list[LabelMask],
    directory: Path,
    frame_pattern: str = DEFAULT_FRAME_PATTERN,
    gt_pattern: str = DEFAULT_GT_PATTERN,
) -> tuple[Path, Path]:
    """
    Write frames to ``directory/input`` and masks to ``directory/groundtruth``.

    Returns:
        The two folders
    """
    frames_dir = directory / "input"
    gt_dir = directory / "groundtruth"
    write_frames(seq, frames_dir, frame_pattern)
    for t, mask in enumerate(masks):
        write_mask(mask, gt_dir / (gt_pattern % (t + 1)), GT_WRITE_VALUES)
    logger.info(
        f"Wrote {seq.frame_count} frames and {len(masks)} masks to {directory}",
        extra={"frames": seq.frame_count, "directory": str(directory)},
    )
    return frames_dir, gt_dir
