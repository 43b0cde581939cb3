"""Stochastic multi-scale patch refinement of foreground masks."""

from .inference import Heatmap, infer_refine, refine_mask, refine_pipeline
from .refinenet import RefineNet, build_refine_net
from .sampling import (
    PatchSample,
    corrupt_mask,
    coverage_layer,
    effective_scale,
    sample_count,
    sample_training_patches,
)
from .training import TrainingPair, surrogate_pairs, train_sbr

__all__ = [
    "Heatmap",
    "PatchSample",
    "RefineNet",
    "TrainingPair",
    "build_refine_net",
    "corrupt_mask",
    "coverage_layer",
    "effective_scale",
    "infer_refine",
    "refine_mask",
    "refine_pipeline",
    "sample_count",
    "sample_training_patches",
    "surrogate_pairs",
    "train_sbr",
]
