"""Segmentation scoring: confusion counts, F-measure and reports."""

from .metrics import (
    ConfusionCounts,
    Summary,
    VideoScore,
    aggregate,
    confusion,
    f_measure,
    precision,
    recall,
)
from .report import (
    VideoJob,
    discover_videos,
    evaluate,
    evaluate_video,
    summary_path,
    write_report,
)

__all__ = [
    "ConfusionCounts",
    "Summary",
    "VideoJob",
    "VideoScore",
    "aggregate",
    "confusion",
    "discover_videos",
    "evaluate",
    "evaluate_video",
    "f_measure",
    "precision",
    "recall",
    "summary_path",
    "write_report",
]
