"""Pytest configuration and fixtures for LTS tests."""

from pathlib import Path

import cv2
import numpy as np
import pytest

from lts.core.config.loader import build_run_config
from lts.types.config import RunConfig
from lts.types.video import SyntheticSceneSpec
from lts.videoio.synthetic import generate_synthetic, moving_square_scene, write_synthetic_scene


@pytest.fixture
def run_config():
    """Default configuration."""
    return RunConfig()


@pytest.fixture
def small_scene() -> SyntheticSceneSpec:
    """A noiseless 16x16 scene of 6 frames with a 4-pixel square."""
    return moving_square_scene(height=16, width=16, frame_count=6, side=4, sigma=0.0, seed=0)


@pytest.fixture
def scene_dir(tmp_path, small_scene) -> Path:
    """`small_scene` written to disk as input/ and groundtruth/."""
    seq, masks = generate_synthetic(small_scene)
    root = tmp_path / "scene"
    write_synthetic_scene(seq, masks, root)
    return root


@pytest.fixture
def write_png():
    """Write a uint8 or uint16 array as a PNG, creating parent folders."""

    def _write(path: Path, image: np.ndarray) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        assert cv2.imwrite(str(path), image)
        return path

    return _write


# Small networks and short schedules so pipeline tests finish in seconds
TINY_SETTINGS = {
    "didl.product_kernels": 2,
    "didl.sum_kernels": 2,
    "didl.mix_channels": 3,
    "didl.hidden_units": 8,
    "didl.batch": 128,
    "didl.lr": 0.001,
    "didl.first_epochs": 2,
    "didl.later_epochs": 1,
    "didl.iterations": 2,
    "didl.initial_fraction": 0.5,
    "sbr.scales": "16",
    "sbr.patches_16": 2,
    "sbr.batch_16": 4,
    "sbr.micro_batch": 4,
    "sbr.epochs": 1,
    "sbr.l": 1,
    "sbr.lr": 0.001,
}


@pytest.fixture
def tiny_config() -> RunConfig:
    return build_run_config(TINY_SETTINGS)


@pytest.fixture
def tiny_config_file(tmp_path) -> Path:
    """TINY_SETTINGS as a key = value file."""
    path = tmp_path / "tiny.conf"
    path.write_text("".join(f"{key} = {value}\n" for key, value in TINY_SETTINGS.items()))
    return path
