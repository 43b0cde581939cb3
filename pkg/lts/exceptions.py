"""Custom exceptions for LTS.

This module defines the exception hierarchy used across the library and the CLI.
Library code raises these; the CLI layer turns them into exit codes.
"""


class LtsError(Exception):
    """Base exception for all LTS errors."""

    pass


class ConfigError(LtsError):
    """Raised when there's an error in configuration loading or parsing."""

    pass


class ValidationError(LtsError):
    """Raised when validation of input data fails."""

    pass


class VideoIOError(LtsError):
    """Raised when frame or mask IO fails."""

    pass


class FrameDirectoryNotFoundError(VideoIOError):
    """Raised when a frame or mask directory does not exist."""

    pass


class NoFramesFoundError(VideoIOError):
    """Raised when no file in a directory matches the naming pattern."""

    pass


class FrameShapeMismatchError(VideoIOError):
    """Raised when frames of one sequence have different dimensions."""

    pass


class UnmappedMaskValueError(VideoIOError):
    """Raised when a mask holds a raw value missing from the value map."""

    def __init__(self, value: int, path: str | None = None):
        location = f" in {path}" if path else ""
        super().__init__(f"unmapped value {value}{location}")
        self.value = value


class MaskShapeMismatchError(VideoIOError):
    """Raised when mask dimensions do not match the frames they label."""

    pass


class HistogramError(LtsError):
    """Raised when histogram extraction or labeling fails."""

    pass


class FrameIndexError(HistogramError):
    """Raised when a reference frame index is outside the sequence."""

    pass


class HistogramCacheError(HistogramError):
    """Raised when a histogram cache file is malformed."""

    pass


class DistributionLayerError(LtsError):
    """Raised when a distribution layer receives invalid input."""

    pass


class NonFiniteInputError(DistributionLayerError):
    """Raised when a value or density contains NaN or infinity."""

    pass


class ShapeError(LtsError):
    """Raised when array shapes are incompatible with an operation."""

    pass


class TrainingError(LtsError):
    """Raised when a training loop cannot run."""

    pass


class EmptyTrainingSetError(TrainingError):
    """Raised when a training subset or corpus is empty."""

    pass


class CheckpointError(LtsError):
    """Raised when a checkpoint cannot be written, read or matched to a model."""

    pass


class InferenceError(LtsError):
    """Raised when inference preconditions are violated."""

    pass


class EvaluationError(LtsError):
    """Raised when scoring inputs are inconsistent or empty."""

    pass
