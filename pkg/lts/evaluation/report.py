"""Video discovery, per-video scoring and CSV reports."""

import csv
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from lts.constants import (
    DEFAULT_GT_PATTERN,
    DEFAULT_GT_VALUE_MAP,
    DEFAULT_PRED_PATTERN,
    PREDICTED_VALUE_MAP,
    Label,
)
from lts.evaluation.metrics import (
    ConfusionCounts,
    Summary,
    VideoScore,
    aggregate,
    confusion,
    precision,
    recall,
)
from lts.exceptions import EvaluationError, NoFramesFoundError
from lts.logging_config import get_logger
from lts.types.video import MaskProvenance
from lts.utils.concurrency import BoundedExecutor
from lts.videoio.frames import list_indexed_files
from lts.videoio.masks import read_mask

logger = get_logger(__name__)

REPORT_COLUMNS = [
    "video",
    "frames_scored",
    "TP",
    "FP",
    "FN",
    "TN",
    "precision",
    "recall",
    "f_measure",
]
SUMMARY_COLUMNS = ["category", "videos", "f_measure"]
GT_SUBDIRECTORY = "groundtruth"


@dataclass(frozen=True)
class VideoJob:
    video: str
    category: str
    pred_dir: Path
    gt_dir: Path


def _has_masks(directory: Path, pattern: str) -> bool:
    try:
        list_indexed_files(directory, pattern)
    except NoFramesFoundError:
        return False
    return True


def _gt_dir(gt_root: Path, relative: Path) -> Path:
    candidate = gt_root / relative
    nested = candidate / GT_SUBDIRECTORY
    return nested if nested.is_dir() else candidate


def discover_videos(
    pred_root: Path, gt_root: Path, pred_pattern: str = DEFAULT_PRED_PATTERN
) -> list[VideoJob]:
    """
    Find prediction folders and their ground-truth counterparts.

    `pred_root` is either one video's mask folder or a tree of
    `category/video` (or plain `video`) folders mirrored under `gt_root`.
    A `groundtruth` sub-folder on the ground-truth side is used when present.

    Raises:
        EvaluationError: If no prediction masks are found
    """
    if not pred_root.is_dir():
        raise EvaluationError(f"Prediction directory not found: {pred_root}")
    if _has_masks(pred_root, pred_pattern):
        return [VideoJob(pred_root.name, pred_root.name, pred_root, _gt_dir(gt_root, Path()))]

    jobs: list[VideoJob] = []
    for first in sorted(p for p in pred_root.iterdir() if p.is_dir()):
        if _has_masks(first, pred_pattern):
            jobs.append(VideoJob(first.name, first.name, first, _gt_dir(gt_root, Path(first.name))))
            continue
        for second in sorted(p for p in first.iterdir() if p.is_dir()):
            if _has_masks(second, pred_pattern):
                relative = Path(first.name) / second.name
                gt_dir = _gt_dir(gt_root, relative)
                jobs.append(VideoJob(relative.as_posix(), first.name, second, gt_dir))
    if not jobs:
        raise EvaluationError(f"No masks matching {pred_pattern!r} under {pred_root}")
    return jobs


def evaluate_video(
    job: VideoJob,
    pred_pattern: str = DEFAULT_PRED_PATTERN,
    gt_pattern: str = DEFAULT_GT_PATTERN,
    gt_value_map: Mapping[int, Label] | None = None,
) -> VideoScore:
    """
    Pool confusion counts over every frame that has both a prediction and a
    ground-truth mask.

    Raises:
        EvaluationError: If no frame index appears on both sides
    """
    predictions = dict(list_indexed_files(job.pred_dir, pred_pattern))
    truths = dict(list_indexed_files(job.gt_dir, gt_pattern))
    common = sorted(set(predictions) & set(truths))
    if not common:
        raise EvaluationError(f"No frame of {job.video} has both a prediction and ground truth")

    value_map = DEFAULT_GT_VALUE_MAP if gt_value_map is None else gt_value_map
    counts = ConfusionCounts()
    for index in common:
        pred = read_mask(predictions[index], PREDICTED_VALUE_MAP, MaskProvenance.PREDICTED)
        gt = read_mask(truths[index], value_map, MaskProvenance.GROUND_TRUTH)
        counts = counts + confusion(pred, gt)

    score = VideoScore(job.video, job.category, counts, len(common))
    logger.info(
        f"{job.video}: F={score.f_measure:.4f} over {len(common)} frames",
        extra={"video": job.video, "f_measure": score.f_measure, "frames": len(common)},
    )
    return score


def evaluate(
    pred_root: Path,
    gt_root: Path,
    pred_pattern: str = DEFAULT_PRED_PATTERN,
    gt_pattern: str = DEFAULT_GT_PATTERN,
    gt_value_map: Mapping[int, Label] | None = None,
    executor: BoundedExecutor | None = None,
) -> tuple[list[VideoScore], Summary]:
    jobs = discover_videos(pred_root, gt_root, pred_pattern)

    def run(job: VideoJob) -> VideoScore:
        return evaluate_video(job, pred_pattern, gt_pattern, gt_value_map)

    scores = executor.map(run, jobs) if executor is not None else [run(j) for j in jobs]
    return scores, aggregate(scores)


def summary_path(report_path: Path) -> Path:
    return report_path.with_name(f"{report_path.stem}_summary{report_path.suffix or '.csv'}")


def write_report(scores: Sequence[VideoScore], summary: Summary, path: Path) -> Path:
    """
    Write the per-video CSV and the category summary next to it.

    Returns:
        Path of the summary file
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(REPORT_COLUMNS)
        for s in scores:
            c = s.counts
            writer.writerow(
                [
                    s.video,
                    s.frames_scored,
                    c.tp,
                    c.fp,
                    c.fn,
                    c.tn,
                    f"{precision(c):.6f}",
                    f"{recall(c):.6f}",
                    f"{s.f_measure:.6f}",
                ]
            )

    target = summary_path(path)
    with target.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SUMMARY_COLUMNS)
        for category, mean in summary.category_means.items():
            writer.writerow([category, summary.category_sizes[category], f"{mean:.6f}"])
        writer.writerow(["overall", len(scores), f"{summary.overall:.6f}"])
    return target
