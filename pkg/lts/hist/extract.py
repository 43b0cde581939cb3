"""Temporal difference histograms and labeled instance pools."""

from collections.abc import Sequence

import numpy as np

from lts.constants import BIN_COUNT, HISTOGRAM_CHANNELS
from lts.exceptions import FrameIndexError, HistogramError, MaskShapeMismatchError
from lts.hist.grid import bin_indices
from lts.logging_config import get_logger
from lts.types.histogram import HistogramField, InstancePool
from lts.types.video import FrameSequence, LabelMask

logger = get_logger(__name__)


def extract_histograms(seq: FrameSequence, t: int) -> HistogramField:
    """
    Histogram of |I_i - I_t| over every frame i, per pixel and channel.

    Each frame contributes 1/T. Differences of [0, 1] intensities lie in
    [0, 1], so only bins 100..200 are populated.

    Raises:
        FrameIndexError: If t is outside [0, T)
    """
    if not 0 <= t < seq.frame_count:
        raise FrameIndexError(f"Frame index {t} outside [0, {seq.frame_count})")

    frames = seq.to_rgb().frames
    reference = frames[t].astype(np.float64)
    h, w, c = reference.shape
    rows = np.arange(h * w * c)

    counts = np.zeros((h * w * c, BIN_COUNT), dtype=np.int64)
    for i in range(seq.frame_count):
        diff = np.abs(frames[i].astype(np.float64) - reference)
        # one increment per (pixel, channel) row, so plain fancy indexing cannot collide
        counts[rows, bin_indices(diff).ravel()] += 1

    mass = counts.reshape(h, w, c, BIN_COUNT) / seq.frame_count
    return HistogramField(mass=mass, t=t)


def label_instances(
    fields: Sequence[HistogramField], masks: Sequence[LabelMask]
) -> InstancePool:
    """
    Attach the ground-truth label at each pixel to its three-channel histograms.

    Instances are ordered row-major by pixel, then by field order.

    Raises:
        HistogramError: If no fields are given or the two lists differ in length
        MaskShapeMismatchError: If a mask does not match its field
    """
    if not fields:
        raise HistogramError("Cannot label an empty list of histogram fields")
    if len(fields) != len(masks):
        raise HistogramError(f"Got {len(fields)} histogram fields but {len(masks)} masks")

    shape = fields[0].shape
    for field, mask in zip(fields, masks):
        if field.shape != shape or mask.shape != shape:
            raise MaskShapeMismatchError(
                f"Histogram field {field.shape} and mask {mask.shape} differ from {shape}"
            )
        if field.mass.shape[2] != HISTOGRAM_CHANNELS:
            raise HistogramError(f"Histogram fields must have {HISTOGRAM_CHANNELS} channels")

    h, w = shape
    n_fields = len(fields)
    stacked = np.stack([f.instances() for f in fields], axis=1).astype(np.float32)
    histograms = stacked.reshape(h * w * n_fields, HISTOGRAM_CHANNELS, BIN_COUNT)
    labels = np.stack([m.labels.reshape(-1) for m in masks], axis=1).reshape(-1)

    ys, xs = np.divmod(np.arange(h * w), w)
    ts = np.array([f.t for f in fields], dtype=np.int64)
    coords = np.stack(
        [
            np.tile(ts, h * w),
            np.repeat(ys, n_fields),
            np.repeat(xs, n_fields),
        ],
        axis=1,
    )
    pool = InstancePool(histograms=histograms, labels=labels.astype(np.uint8), coords=coords)
    logger.debug(
        f"Labeled {pool.size} instances from {n_fields} frames",
        extra={"instances": pool.size, "frames": n_fields},
    )
    return pool


def extract_pool(seq: FrameSequence, gt: Sequence[LabelMask], stride: int) -> InstancePool:
    """
    Build a labeled pool from every `stride`-th reference frame.

    Args:
        seq: Video frames
        gt: One ground-truth mask per frame
        stride: Step between sampled reference frames

    Raises:
        HistogramError: If mask and frame counts differ
    """
    if len(gt) != seq.frame_count:
        raise HistogramError(f"Got {len(gt)} masks for {seq.frame_count} frames")
    if stride < 1:
        raise HistogramError("stride must be ≥ 1")

    ts = list(range(0, seq.frame_count, stride))
    fields = [extract_histograms(seq, t) for t in ts]
    pool = label_instances(fields, [gt[t] for t in ts])
    logger.info(
        f"Extracted {pool.size} instances from {len(ts)} reference frames",
        extra={"instances": pool.size, "reference_frames": len(ts), "stride": stride},
    )
    return pool
