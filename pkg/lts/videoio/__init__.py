"""Frame and mask IO, plus synthetic scenes."""

from .frames import load_frames, normalize_intensities, pattern_to_regex, to_uint8, write_frames
from .masks import load_gt_masks, load_masks, read_mask, write_heatmap, write_mask
from .synthetic import generate_synthetic, moving_square_scene, write_synthetic_scene

__all__ = [
    "generate_synthetic",
    "load_frames",
    "load_gt_masks",
    "load_masks",
    "moving_square_scene",
    "normalize_intensities",
    "pattern_to_regex",
    "read_mask",
    "to_uint8",
    "write_frames",
    "write_heatmap",
    "write_mask",
    "write_synthetic_scene",
]
