"""Frame sequence loading and intensity normalization."""

import re
from pathlib import Path

import cv2
import numpy as np

from lts.constants import DEFAULT_FRAME_PATTERN
from lts.exceptions import (
    FrameDirectoryNotFoundError,
    FrameShapeMismatchError,
    NoFramesFoundError,
    VideoIOError,
)
from lts.logging_config import get_logger
from lts.types.video import FrameSequence

logger = get_logger(__name__)

_PRINTF_INDEX = re.compile(r"%(0?)(\d*)d")


def pattern_to_regex(naming_pattern: str) -> re.Pattern[str]:
    """
    Turn a printf-style file pattern such as ``in%06d.png`` into a regex.

    The single integer field becomes a capture group for the frame index.

    Raises:
        VideoIOError: If the pattern has no integer field or more than one
    """
    fields = list(_PRINTF_INDEX.finditer(naming_pattern))
    if len(fields) != 1:
        raise VideoIOError(
            f"Pattern {naming_pattern!r} must contain exactly one integer field such as %06d"
        )
    field = fields[0]
    prefix = re.escape(naming_pattern[: field.start()])
    suffix = re.escape(naming_pattern[field.end() :])
    return re.compile(rf"^{prefix}(\d+){suffix}$")


def list_indexed_files(directory: Path, naming_pattern: str) -> list[tuple[int, Path]]:
    """
    List files matching the pattern, sorted by their numeric index.

    Raises:
        FrameDirectoryNotFoundError: If the directory does not exist
        NoFramesFoundError: If no file matches
    """
    if not directory.is_dir():
        raise FrameDirectoryNotFoundError(f"Directory not found: {directory}")

    regex = pattern_to_regex(naming_pattern)
    indexed: list[tuple[int, Path]] = []
    for entry in directory.iterdir():
        match = regex.match(entry.name)
        if match and entry.is_file():
            indexed.append((int(match.group(1)), entry))

    if not indexed:
        raise NoFramesFoundError(f"No files matching {naming_pattern!r} in {directory}")
    indexed.sort(key=lambda item: item[0])
    return indexed


def normalize_intensities(raw: np.ndarray) -> np.ndarray:
    """
    Divide by the bit-depth maximum into [0, 1].

    Raises:
        VideoIOError: If the image is neither 8- nor 16-bit
    """
    if raw.dtype == np.uint8:
        return raw.astype(np.float32) / np.float32(255.0)
    if raw.dtype == np.uint16:
        return raw.astype(np.float32) / np.float32(65535.0)
    raise VideoIOError(f"Unsupported image depth {raw.dtype}; expected 8- or 16-bit")


def to_uint8(values: np.ndarray) -> np.ndarray:
    """Quantize [0, 1] intensities to bytes with round-half-up."""
    return np.floor(np.clip(values, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def read_image(path: Path) -> np.ndarray:
    """
    Read an image as normalized (H, W, 3) RGB.

    Grayscale images are replicated to three channels and alpha is dropped.
    """
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise VideoIOError(f"Cannot read image {path}")

    image = normalize_intensities(raw)
    if image.ndim == 2:
        return np.repeat(image[:, :, None], 3, axis=2)
    if image.shape[2] == 4:
        return cv2.cvtColor(image, cv2.COLOR_BGRA2RGB)
    if image.shape[2] == 3:
        return cv2.cvtColor(image, cv2.COLOR_BGR2RGB)
    raise VideoIOError(f"Unsupported channel count {image.shape[2]} in {path}")


def load_frames(directory: Path, naming_pattern: str = DEFAULT_FRAME_PATTERN) -> FrameSequence:
    """
    Load an image sequence sorted by frame index.

    Args:
        directory: Folder holding the frames
        naming_pattern: printf-style file name pattern

    Returns:
        RGB FrameSequence with intensities in [0, 1]

    Raises:
        FrameDirectoryNotFoundError: Missing directory
        NoFramesFoundError: No file matches the pattern
        FrameShapeMismatchError: Frames differ in height or width
    """
    files = list_indexed_files(directory, naming_pattern)

    frames: list[np.ndarray] = []
    for index, path in files:
        image = read_image(path)
        if frames and image.shape != frames[0].shape:
            raise FrameShapeMismatchError(
                f"Frame {index} ({path.name}) is {image.shape[1]}x{image.shape[0]}, "
                f"expected {frames[0].shape[1]}x{frames[0].shape[0]}"
            )
        frames.append(image)

    logger.info(
        f"Loaded {len(frames)} frames from {directory}",
        extra={"frames": len(frames), "directory": str(directory)},
    )
    return FrameSequence(np.stack(frames))


def write_frames(
    seq: FrameSequence, directory: Path, naming_pattern: str = DEFAULT_FRAME_PATTERN
) -> list[Path]:
    """Write frames as 8-bit PNGs numbered from 1."""
    directory.mkdir(parents=True, exist_ok=True)
    rgb = seq.to_rgb()
    written: list[Path] = []
    for t in range(rgb.frame_count):
        path = directory / (naming_pattern % (t + 1))
        bgr = cv2.cvtColor(to_uint8(rgb.frame(t)), cv2.COLOR_RGB2BGR)
        if not cv2.imwrite(str(path), bgr):
            raise VideoIOError(f"Cannot write frame {path}")
        written.append(path)
    return written
