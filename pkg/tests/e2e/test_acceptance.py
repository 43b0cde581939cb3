"""Slow acceptance runs on desk-scale synthetic scenes.

Each class trains real models with the library API, so these are marked
slow and left out of the default `pytest -m "not slow"` run.
"""

import numpy as np
import pytest

from lts.didl import defect_iterate, predict_mask
from lts.evaluation import ConfusionCounts, confusion, f_measure
from lts.hist import extract_pool
from lts.sbr import TrainingPair, refine_mask, surrogate_pairs, train_sbr
from lts.types.config import DidlSettings, SbrSettings
from lts.videoio.synthetic import generate_synthetic, moving_square_scene

pytestmark = [pytest.mark.e2e, pytest.mark.slow]

TRAIN_FRAMES = range(0, 48)
HELD_OUT_FRAMES = range(48, 60)
SCORED_FRAMES = range(3, 60, 6)


def _refine_settings() -> SbrSettings:
    return SbrSettings(
        scales=(16,), patches_16=48, batch_16=64, lr=1e-3, epochs=30, l=2, micro_batch=64
    )


def _pooled_f(pairs) -> float:
    total = ConfusionCounts()
    for pred, gt in pairs:
        total = total + confusion(pred, gt)
    return f_measure(total)


@pytest.fixture(scope="module")
def square_scene():
    """64x64, 60 frames, a 10x10 square on the diagonal, noise sigma 0.02."""
    seq, gt = generate_synthetic(moving_square_scene(64, 64, 60, side=10, sigma=0.02, seed=0))
    return seq, seq.to_rgb(), gt


@pytest.fixture(scope="module")
def identity_net(square_scene):
    """Refine block trained with the clean ground truth as its input plane."""
    _, rgb, gt = square_scene
    pairs = [TrainingPair(rgb.frame(t), gt[t].foreground(), gt[t]) for t in TRAIN_FRAMES]
    net, _ = train_sbr(pairs, _refine_settings(), seed=0)
    return net


@pytest.fixture(scope="module")
def denoising_net(square_scene):
    """Refine block trained on eroded, salt-and-pepper copies of the ground truth."""
    seq, _, gt = square_scene
    settings = _refine_settings()
    pairs = surrogate_pairs(seq, gt, settings, np.random.default_rng(0))
    net, _ = train_sbr([pairs[t] for t in TRAIN_FRAMES], settings, seed=0)
    return net


class TestRefineBlock:
    def test_clean_input_is_reproduced(self, square_scene, identity_net):
        _, rgb, gt = square_scene

        agreement = [
            np.mean(
                refine_mask(identity_net, rgb.frame(t), gt[t], layers=2, seed=t, scales=(16,))[1]
                .foreground()
                == gt[t].foreground()
            )
            for t in HELD_OUT_FRAMES
        ]

        assert min(agreement) >= 0.99

    def test_noise_masks_stay_noise(self, square_scene, identity_net):
        _, rgb, gt = square_scene
        rng = np.random.default_rng(7)

        scored = [
            (
                refine_mask(
                    identity_net, rgb.frame(t), rng.random((64, 64)) < 0.5,
                    layers=2, seed=t, scales=(16,),
                )[1],
                gt[t],
            )
            for t in SCORED_FRAMES
        ]  # fmt: skip

        assert _pooled_f(scored) <= 0.2


class TestSyntheticScene:
    def test_classifier_then_refinement(self, square_scene, denoising_net):
        seq, rgb, gt = square_scene
        pool = extract_pool(seq, gt, stride=10)
        model, _ = defect_iterate(pool, DidlSettings(lr=1e-3), seed=0)

        didl = [(predict_mask(model, seq, t, batch=4096), gt[t]) for t in SCORED_FRAMES]
        refined = [
            (refine_mask(denoising_net, rgb.frame(t), mask, layers=2, seed=t, scales=(16,))[1], g)
            for t, (mask, g) in zip(SCORED_FRAMES, didl, strict=True)
        ]

        didl_f = _pooled_f(didl)
        assert didl_f >= 0.85
        assert _pooled_f(refined) >= didl_f - 0.01


class TestDefectIteration:
    def test_fifty_thousand_instance_pool(self):
        # 12 reference frames of 70x60 pixels: 50,400 instances
        seq, gt = generate_synthetic(moving_square_scene(70, 60, 60, side=10, seed=1))
        pool = extract_pool(seq, gt, stride=5)
        assert pool.size == 50_400

        _, report = defect_iterate(pool, DidlSettings(initial_fraction=0.1), seed=0)

        assert report.iterations == 4
        assert report.subset_sizes == sorted(report.subset_sizes)
        assert report.accuracies[-1] >= report.accuracies[0]
