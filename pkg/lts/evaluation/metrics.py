"""Confusion counts, F-measure and category averaging."""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from lts.constants import Label
from lts.exceptions import EvaluationError
from lts.types.video import LabelMask


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise EvaluationError("Confusion counts cannot be negative")

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def confusion(pred: LabelMask, gt: LabelMask) -> ConfusionCounts:
    """
    Tally a prediction against ground truth.

    Ground-truth Other pixels are not scored; predicted Other counts as background.

    Raises:
        EvaluationError: If the masks differ in size
    """
    if pred.shape != gt.shape:
        raise EvaluationError(f"Prediction {pred.shape} and ground truth {gt.shape} differ in size")
    scored = gt.labels != Label.OTHER.value
    predicted = pred.labels[scored] == Label.FOREGROUND.value
    actual = gt.labels[scored] == Label.FOREGROUND.value
    return ConfusionCounts(
        tp=int(np.count_nonzero(predicted & actual)),
        fp=int(np.count_nonzero(predicted & ~actual)),
        fn=int(np.count_nonzero(~predicted & actual)),
        tn=int(np.count_nonzero(~predicted & ~actual)),
    )


def precision(c: ConfusionCounts) -> float:
    """TP / (TP + FP); 1 when nothing was predicted foreground."""
    predicted = c.tp + c.fp
    return c.tp / predicted if predicted else 1.0


def recall(c: ConfusionCounts) -> float:
    """TP / (TP + FN); 1 when there is no foreground to find."""
    actual = c.tp + c.fn
    return c.tp / actual if actual else 1.0


def f_measure(c: ConfusionCounts) -> float:
    """
    Harmonic mean of precision and recall.

    With TP = 0 the result is 0, unless FP and FN are also 0, which scores 1.
    """
    if c.tp == 0:
        return 1.0 if c.fp + c.fn == 0 else 0.0
    return 2 * c.tp / (2 * c.tp + c.fp + c.fn)


@dataclass(frozen=True)
class VideoScore:
    video: str
    category: str
    counts: ConfusionCounts
    frames_scored: int

    @property
    def f_measure(self) -> float:
        return f_measure(self.counts)


@dataclass(frozen=True)
class Summary:
    category_means: dict[str, float]
    category_sizes: dict[str, int]
    overall: float


def aggregate(scores: Sequence[VideoScore]) -> Summary:
    """
    Mean F of the videos of each category, then the mean of the category means.

    Sums run in sorted order, so the result does not depend on input order.

    Raises:
        EvaluationError: If there are no scores
    """
    if not scores:
        raise EvaluationError("Nothing to aggregate")
    by_category: dict[str, list[float]] = {}
    for score in sorted(scores, key=lambda s: (s.category, s.video)):
        by_category.setdefault(score.category, []).append(score.f_measure)

    means = {
        category: math.fsum(values) / len(values)
        for category, values in sorted(by_category.items())
    }
    overall = math.fsum(means.values()) / len(means)
    sizes = {category: len(values) for category, values in sorted(by_category.items())}
    return Summary(category_means=means, category_sizes=sizes, overall=overall)
