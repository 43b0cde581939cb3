"""Patch geometry: coverage tilings for inference and random crops for training."""

from dataclasses import dataclass

import cv2
import numpy as np

from lts.constants import SBR_PATCH_MULTIPLE, Label
from lts.exceptions import InferenceError, ShapeError
from lts.nn.losses import IGNORE_INDEX
from lts.types.config import SbrSettings
from lts.types.video import LabelMask


@dataclass(frozen=True)
class PatchSample:
    top: int
    left: int
    scale: int
    layer: int

    def window(self) -> tuple[slice, slice]:
        return (slice(self.top, self.top + self.scale), slice(self.left, self.left + self.scale))


def sample_count(height: int, width: int, scale: int, layers: int) -> int:
    """n = ceil(H·W / s²) · l."""
    return -(-(height * width) // (scale * scale)) * layers


def effective_scale(height: int, width: int, scale: int) -> int:
    """
    Largest usable side not above `scale`: patches must fit the image and be
    a multiple of 8.

    Raises:
        InferenceError: If the image is smaller than 8 pixels on a side
    """
    fitting = (min(height, width) // SBR_PATCH_MULTIPLE) * SBR_PATCH_MULTIPLE
    if fitting < SBR_PATCH_MULTIPLE:
        raise InferenceError(
            f"Image {height}x{width} is smaller than the minimum patch side {SBR_PATCH_MULTIPLE}"
        )
    return min(scale, fitting)


def _tile_starts(length: int, scale: int, offset: int) -> list[int]:
    starts = set()
    k = -1
    while offset + k * scale < length:
        starts.add(min(max(offset + k * scale, 0), length - scale))
        k += 1
    return sorted(starts)


def coverage_layer(
    height: int, width: int, scale: int, offset: tuple[int, int], layer: int = 0
) -> list[PatchSample]:
    """
    Tile the image with s x s patches shifted by `offset`; patches crossing a
    border are clamped inward, so every pixel is covered at least once.
    """
    rows = _tile_starts(height, scale, offset[0])
    cols = _tile_starts(width, scale, offset[1])
    return [PatchSample(top, left, scale, layer) for top in rows for left in cols]


def patch_input(image: np.ndarray, foreground: np.ndarray) -> np.ndarray:
    """Stack RGB (H, W, 3) and a foreground plane (H, W) into a (4, H, W) tensor."""
    if image.ndim != 3 or image.shape[2] != 3:
        raise ShapeError(f"Expected an (H, W, 3) image, got {image.shape}")
    if foreground.shape != image.shape[:2]:
        raise ShapeError(
            f"Foreground plane {foreground.shape} does not match image {image.shape[:2]}"
        )
    return np.concatenate(
        [image.transpose(2, 0, 1), foreground[None].astype(image.dtype)], axis=0
    )


def crop(tensor: np.ndarray, tops: np.ndarray, lefts: np.ndarray, scale: int) -> np.ndarray:
    """Gather (n, ..., s, s) crops from a (..., H, W) array."""
    rows = tops[:, None] + np.arange(scale)
    cols = lefts[:, None] + np.arange(scale)
    patches = tensor[..., rows[:, :, None], cols[:, None, :]]
    return np.moveaxis(patches, -3, 0)


def training_targets(gt: LabelMask) -> np.ndarray:
    """Background 0, Foreground 1, Other ignored."""
    targets = gt.labels.astype(np.int8)
    targets[gt.labels == Label.OTHER.value] = IGNORE_INDEX
    return targets


def sample_training_patches(
    image: np.ndarray,
    foreground: np.ndarray,
    gt: LabelMask,
    settings: SbrSettings,
    rng: np.random.Generator,
) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """
    Random fully-inside crops at every configured scale that fits the image.

    Returns:
        scale -> ((n, 4, s, s) inputs, (n, s, s) targets)
    """
    height, width = gt.shape
    tensor = patch_input(image, foreground)
    targets = training_targets(gt)

    patches: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for scale in settings.scales:
        if scale > height or scale > width:
            continue
        n = settings.patches_per_image(scale)
        tops = rng.integers(0, height - scale + 1, size=n)
        lefts = rng.integers(0, width - scale + 1, size=n)
        patches[scale] = (crop(tensor, tops, lefts, scale), crop(targets, tops, lefts, scale))
    return patches


def corrupt_mask(
    foreground: np.ndarray,
    rng: np.random.Generator,
    salt_pepper_rate: float,
    nibble_probability: float,
) -> np.ndarray:
    """
    Degrade a clean foreground plane: occasionally erode it, then overwrite a
    random fraction of pixels with random values.
    """
    plane = foreground.astype(np.uint8)
    if rng.random() < nibble_probability:
        plane = cv2.erode(plane, np.ones((3, 3), dtype=np.uint8), iterations=1)
    noisy = rng.random(plane.shape) < salt_pepper_rate
    plane[noisy] = rng.integers(0, 2, size=int(noisy.sum()), dtype=np.uint8)
    return plane.astype(bool)
