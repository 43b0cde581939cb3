from .config import DidlSettings, HistogramSettings, RunConfig, SbrSettings, ZeroBinRule
from .histogram import HistogramField, InstancePool, TemporalHistogram
from .video import (
    FrameSequence,
    LabelMask,
    MaskProvenance,
    SyntheticObject,
    SyntheticSceneSpec,
)

__all__ = [
    "DidlSettings",
    "FrameSequence",
    "HistogramField",
    "HistogramSettings",
    "InstancePool",
    "LabelMask",
    "MaskProvenance",
    "RunConfig",
    "SbrSettings",
    "SyntheticObject",
    "SyntheticSceneSpec",
    "TemporalHistogram",
    "ZeroBinRule",
]
