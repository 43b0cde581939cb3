"""The distribution-learning classifier and its defect-iteration training."""

from .model import DidlModel, FullWidthConv, build_model
from .predict import classify_histograms, predict_mask
from .training import (
    TrainReport,
    defect_iterate,
    initial_subset,
    train_epochs,
    validate_and_collect_defects,
)

__all__ = [
    "DidlModel",
    "FullWidthConv",
    "TrainReport",
    "build_model",
    "classify_histograms",
    "defect_iterate",
    "initial_subset",
    "predict_mask",
    "train_epochs",
    "validate_and_collect_defects",
]
