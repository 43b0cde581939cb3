"""Label mask and heatmap IO."""

from collections.abc import Mapping
from pathlib import Path

import cv2
import numpy as np

from lts.constants import (
    DEFAULT_GT_PATTERN,
    DEFAULT_GT_VALUE_MAP,
    MASK_WRITE_VALUES,
    PREDICTED_VALUE_MAP,
    Label,
)
from lts.exceptions import MaskShapeMismatchError, UnmappedMaskValueError, VideoIOError
from lts.logging_config import get_logger
from lts.types.video import LabelMask, MaskProvenance
from lts.videoio.frames import list_indexed_files, to_uint8

logger = get_logger(__name__)

_UNMAPPED = 255


def _read_single_channel(path: Path) -> np.ndarray:
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise VideoIOError(f"Cannot read mask {path}")
    if raw.dtype != np.uint8:
        raise VideoIOError(f"Mask {path} must be 8-bit, got {raw.dtype}")
    if raw.ndim == 3:
        # Masks saved as color images are accepted when all channels agree
        if not np.all(raw == raw[:, :, :1]):
            raise VideoIOError(f"Mask {path} must be single-channel")
        raw = raw[:, :, 0]
    return raw


def map_mask_values(
    raw: np.ndarray,
    value_map: Mapping[int, Label],
    provenance: MaskProvenance,
    source: str | None = None,
) -> LabelMask:
    """
    Map raw 8-bit values to labels.

    Raises:
        UnmappedMaskValueError: If a raw value is absent from the map
    """
    lut = np.full(256, _UNMAPPED, dtype=np.uint8)
    for value, label in value_map.items():
        lut[int(value)] = Label(label).value
    labels = lut[raw]
    unmapped = labels == _UNMAPPED
    if np.any(unmapped):
        raise UnmappedMaskValueError(int(raw[unmapped][0]), source)
    return LabelMask(labels, provenance)


def read_mask(
    path: Path,
    value_map: Mapping[int, Label] = PREDICTED_VALUE_MAP,
    provenance: MaskProvenance = MaskProvenance.PREDICTED,
) -> LabelMask:
    """Read one mask file; the default map inverts `write_mask`."""
    return map_mask_values(_read_single_channel(path), value_map, provenance, str(path))


def load_masks(
    directory: Path,
    naming_pattern: str,
    value_map: Mapping[int, Label],
    provenance: MaskProvenance,
    expected_shape: tuple[int, int] | None = None,
) -> list[LabelMask]:
    """
    Load an indexed mask sequence.

    Raises:
        FrameDirectoryNotFoundError: Missing directory
        NoFramesFoundError: No file matches the pattern
        UnmappedMaskValueError: A raw value is absent from the map
        MaskShapeMismatchError: A mask differs from the expected frame size
    """
    masks: list[LabelMask] = []
    for index, path in list_indexed_files(directory, naming_pattern):
        mask = read_mask(path, value_map, provenance)
        reference = expected_shape or (masks[0].shape if masks else mask.shape)
        if mask.shape != reference:
            raise MaskShapeMismatchError(
                f"Mask {index} ({path.name}) is {mask.shape[1]}x{mask.shape[0]}, "
                f"expected {reference[1]}x{reference[0]}"
            )
        masks.append(mask)

    logger.info(
        f"Loaded {len(masks)} masks from {directory}",
        extra={"masks": len(masks), "directory": str(directory)},
    )
    return masks


def load_gt_masks(
    directory: Path,
    value_map: Mapping[int, Label] | None = None,
    naming_pattern: str = DEFAULT_GT_PATTERN,
    expected_shape: tuple[int, int] | None = None,
) -> list[LabelMask]:
    """
    Load ground-truth masks.

    Args:
        directory: Folder holding the masks
        value_map: Raw value to label map (defaults to the CDNet convention)
        naming_pattern: printf-style file name pattern
        expected_shape: (H, W) of the frames the masks label

    Returns:
        One LabelMask per file in index order
    """
    return load_masks(
        directory,
        naming_pattern,
        DEFAULT_GT_VALUE_MAP if value_map is None else value_map,
        MaskProvenance.GROUND_TRUTH,
        expected_shape,
    )


def encode_mask(mask: LabelMask, values: Mapping[Label, int] = MASK_WRITE_VALUES) -> np.ndarray:
    lut = np.zeros(len(Label), dtype=np.uint8)
    for label, value in values.items():
        lut[Label(label).value] = value
    return lut[mask.labels]


def _write(path: Path, image: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        ok = cv2.imwrite(str(path), image)
    except cv2.error as e:
        raise VideoIOError(f"Cannot write {path}: {e}") from e
    if not ok:
        raise VideoIOError(f"Cannot write {path}")


def write_mask(
    mask: LabelMask, path: Path, values: Mapping[Label, int] = MASK_WRITE_VALUES
) -> None:
    """Write a mask as an 8-bit single-channel image (Background 0, Foreground 255, Other 128)."""
    _write(path, encode_mask(mask, values))


def write_heatmap(values: np.ndarray, path: Path) -> None:
    """
    Write [0, 1] values as an 8-bit image, byte = round(v * 255).

    Raises:
        VideoIOError: If values leave [0, 1] or the file cannot be written
    """
    if values.ndim != 2:
        raise VideoIOError(f"Heatmap must be 2-D, got shape {values.shape}")
    if not np.all(np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0:
        raise VideoIOError("Heatmap values must lie in [0, 1]")
    _write(path, to_uint8(values))
