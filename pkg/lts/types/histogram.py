from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from lts.constants import BIN_COUNT, HISTOGRAM_CHANNELS, Label
from lts.exceptions import ShapeError


@dataclass(frozen=True)
class TemporalHistogram:
    """One pixel's distribution of temporal differences in one channel."""

    mass: np.ndarray
    y: int
    x: int
    channel: int
    t: int

    def __post_init__(self) -> None:
        if self.mass.shape != (BIN_COUNT,):
            raise ShapeError(f"Histogram must have {BIN_COUNT} bins, got {self.mass.shape}")


@dataclass(frozen=True)
class HistogramField:
    """Histograms of every pixel and channel for reference frame t, shape (H, W, C, 201)."""

    mass: np.ndarray
    t: int

    def __post_init__(self) -> None:
        if self.mass.ndim != 4 or self.mass.shape[3] != BIN_COUNT:
            raise ShapeError(
                f"Histogram field must be (H, W, C, {BIN_COUNT}), got {self.mass.shape}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.mass.shape[0]), int(self.mass.shape[1]))

    def histogram(self, y: int, x: int, channel: int) -> TemporalHistogram:
        return TemporalHistogram(self.mass[y, x, channel], y=y, x=x, channel=channel, t=self.t)

    def instances(self) -> np.ndarray:
        """Row-major (H*W, C, 201) view, one row per pixel."""
        h, w, c, b = self.mass.shape
        return self.mass.reshape(h * w, c, b)


@dataclass(frozen=True)
class InstancePool:
    """
    Labeled three-channel histogram instances.

    Attributes:
        histograms: (N, 3, 201) masses
        labels: (N,) Label values
        coords: optional (N, 3) integer (t, y, x) of each instance
    """

    histograms: np.ndarray
    labels: np.ndarray
    coords: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.histograms.ndim != 3 or self.histograms.shape[1:] != (
            HISTOGRAM_CHANNELS,
            BIN_COUNT,
        ):
            raise ShapeError(
                f"Pool histograms must be (N, {HISTOGRAM_CHANNELS}, {BIN_COUNT}), "
                f"got {self.histograms.shape}"
            )
        if self.labels.shape != (self.histograms.shape[0],):
            raise ShapeError("Pool labels must hold one entry per instance")
        if self.coords is not None and self.coords.shape != (self.histograms.shape[0], 3):
            raise ShapeError("Pool coordinates must be (N, 3)")

    def __len__(self) -> int:
        return int(self.histograms.shape[0])

    @property
    def size(self) -> int:
        return len(self)

    def counts(self) -> dict[Label, int]:
        tallies = np.bincount(self.labels.astype(np.int64), minlength=len(Label))
        return {label: int(tallies[label.value]) for label in Label}

    def subset(self, indices: Sequence[int] | np.ndarray) -> "InstancePool":
        idx = np.asarray(indices, dtype=np.int64)
        return InstancePool(
            histograms=self.histograms[idx],
            labels=self.labels[idx],
            coords=None if self.coords is None else self.coords[idx],
        )

