"""Per-pixel classification with a trained model."""

from typing import TYPE_CHECKING

import numpy as np

from lts.hist.extract import extract_histograms
from lts.logging_config import get_logger
from lts.types.video import FrameSequence, LabelMask, MaskProvenance
from lts.utils.concurrency import BoundedExecutor

if TYPE_CHECKING:
    from lts.didl.model import DidlModel

logger = get_logger(__name__)


def classify_histograms(
    model: "DidlModel",
    histograms: np.ndarray,
    batch: int,
    executor: BoundedExecutor | None = None,
) -> np.ndarray:
    """Argmax labels for (M, 3, 201) masses, evaluated in chunks of `batch`."""
    starts = list(range(0, histograms.shape[0], batch))

    def run(start: int) -> np.ndarray:
        log_probs = model.log_probabilities(histograms[start : start + batch])
        return log_probs.argmax(axis=1).astype(np.uint8)

    parts = executor.map(run, starts) if executor is not None else [run(s) for s in starts]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)


def predict_mask(
    model: "DidlModel",
    seq: FrameSequence,
    t: int,
    batch: int,
    executor: BoundedExecutor | None = None,
) -> LabelMask:
    """
    Classify every pixel of frame t.

    Raises:
        FrameIndexError: If t is outside the sequence
    """
    field = extract_histograms(seq, t)
    labels = classify_histograms(model, field.instances(), batch, executor)
    logger.debug(f"Classified {labels.size} pixels of frame {t}")
    return LabelMask(labels.reshape(field.shape), provenance=MaskProvenance.PREDICTED)
