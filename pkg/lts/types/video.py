from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, Field, field_validator

from lts.constants import Label
from lts.exceptions import ShapeError, ValidationError


class MaskProvenance(str, Enum):
    GROUND_TRUTH = "ground_truth"
    PREDICTED = "predicted"


@dataclass(frozen=True)
class FrameSequence:
    """
    A video as a (T, H, W, C) array of intensities in [0, 1].

    C is 1 (grayscale) or 3 (RGB). Loaders return RGB; `to_rgb` replicates
    grayscale input for code that builds three-channel histograms.
    """

    frames: np.ndarray

    def __post_init__(self) -> None:
        if self.frames.ndim != 4:
            raise ShapeError(f"Frames must be (T, H, W, C), got shape {self.frames.shape}")
        t, h, w, c = self.frames.shape
        if t < 1 or h < 1 or w < 1:
            raise ShapeError(f"Empty frame sequence: shape {self.frames.shape}")
        if c not in (1, 3):
            raise ShapeError(f"Frames must have 1 or 3 channels, got {c}")
        if not np.all(np.isfinite(self.frames)):
            raise ValidationError("Frame intensities must be finite")
        if self.frames.min() < 0.0 or self.frames.max() > 1.0:
            raise ValidationError("Frame intensities must lie in [0, 1]")

    @property
    def frame_count(self) -> int:
        return int(self.frames.shape[0])

    @property
    def height(self) -> int:
        return int(self.frames.shape[1])

    @property
    def width(self) -> int:
        return int(self.frames.shape[2])

    @property
    def channels(self) -> int:
        return int(self.frames.shape[3])

    def to_rgb(self) -> "FrameSequence":
        if self.channels == 3:
            return self
        return FrameSequence(np.repeat(self.frames, 3, axis=3))

    def frame(self, t: int) -> np.ndarray:
        return self.frames[t]


@dataclass(frozen=True)
class LabelMask:
    """Per-pixel labels over {Background, Foreground, Other}."""

    labels: np.ndarray
    provenance: MaskProvenance = MaskProvenance.PREDICTED

    def __post_init__(self) -> None:
        if self.labels.ndim != 2:
            raise ShapeError(f"Label mask must be 2-D, got shape {self.labels.shape}")
        valid = np.isin(self.labels, [label.value for label in Label])
        if not np.all(valid):
            raise ValidationError("Label mask holds values outside {0, 1, 2}")

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.labels.shape[0]), int(self.labels.shape[1]))

    def foreground(self) -> np.ndarray:
        """Boolean plane; Other counts as not foreground."""
        return self.labels == Label.FOREGROUND

    def count(self, label: Label) -> int:
        return int(np.count_nonzero(self.labels == label))


class SyntheticObject(BaseModel):
    """An axis-aligned rectangle moving with constant velocity."""

    top: float
    left: float
    height: int = Field(ge=1)
    width: int = Field(ge=1)
    velocity: tuple[float, float] = (0.0, 0.0)
    intensity: tuple[float, float, float] = (1.0, 1.0, 1.0)

    @field_validator("intensity")
    @classmethod
    def validate_intensity(cls, v: tuple[float, float, float]) -> tuple[float, float, float]:
        if any(not 0.0 <= c <= 1.0 for c in v):
            raise ValueError("object intensity must lie in [0, 1]")
        return v

    def position(self, t: int) -> tuple[int, int]:
        """Integer top-left corner at frame t."""
        return (
            int(np.floor(self.top + self.velocity[0] * t)),
            int(np.floor(self.left + self.velocity[1] * t)),
        )

    class Config:
        frozen = True


class SyntheticSceneSpec(BaseModel):
    height: int = Field(ge=1)
    width: int = Field(ge=1)
    frame_count: int = Field(ge=1)
    background: tuple[float, float, float] = (0.2, 0.2, 0.2)
    objects: list[SyntheticObject] = []
    sigma: float = Field(default=0.0, ge=0.0)
    seed: int = Field(default=0, ge=0)

    @field_validator("background")
    @classmethod
    def validate_background(cls, v: tuple[float, float, float]) -> tuple[float, float, float]:
        if any(not 0.0 <= c <= 1.0 for c in v):
            raise ValueError("background intensity must lie in [0, 1]")
        return v

    class Config:
        frozen = True
