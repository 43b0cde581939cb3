"""Tests for patch sampling, the refine block and heatmap inference."""

import math

import numpy as np
import pytest

from lts.constants import Label
from lts.exceptions import EmptyTrainingSetError, InferenceError, ShapeError
from lts.sbr import (
    Heatmap,
    RefineNet,
    TrainingPair,
    build_refine_net,
    corrupt_mask,
    coverage_layer,
    effective_scale,
    infer_refine,
    refine_mask,
    sample_count,
    sample_training_patches,
    surrogate_pairs,
    train_sbr,
)
from lts.types.config import SbrSettings
from lts.types.video import LabelMask
from lts.utils.concurrency import BoundedExecutor
from lts.videoio.synthetic import generate_synthetic

SMALL_WIDTHS = (2, 3, 4, 4)


def _tiny_net(seed: int = 0) -> RefineNet:
    return RefineNet(np.random.default_rng(seed), widths=SMALL_WIDTHS)


def _image_and_plane(size: int = 40) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(0)
    image = rng.random((size, size, 3)).astype(np.float32)
    plane = np.zeros((size, size), dtype=bool)
    plane[10:20, 12:25] = True
    return image, plane


class TestGeometry:
    def test_sample_count_formula(self):
        assert sample_count(240, 360, 64, 32) == 704

    def test_sample_count_random_tuples(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            h, w = (int(v) for v in rng.integers(8, 500, size=2))
            s = int(rng.choice([8, 16, 32, 64]))
            layers = int(rng.integers(1, 40))

            assert sample_count(h, w, s, layers) == math.ceil(h * w / s**2) * layers

    @pytest.mark.parametrize(
        ("height", "width", "scale", "expected"),
        [(240, 360, 64, 64), (20, 30, 64, 16), (10, 10, 16, 8), (40, 41, 64, 40)],
    )
    def test_effective_scale(self, height, width, scale, expected):
        assert effective_scale(height, width, scale) == expected

    def test_image_too_small(self):
        with pytest.raises(InferenceError):
            effective_scale(5, 20, 16)

    @pytest.mark.parametrize("offset", [(0, 0), (3, 7), (15, 1)])
    def test_coverage_layer_covers_every_pixel(self, offset):
        counts = np.zeros((37, 50), dtype=int)

        for sample in coverage_layer(37, 50, 16, offset):
            rows, cols = sample.window()
            assert 0 <= sample.top <= 37 - 16 and 0 <= sample.left <= 50 - 16
            counts[rows, cols] += 1

        assert counts.min() >= 1

    def test_corrupt_mask_without_noise_is_identity(self):
        plane = np.zeros((8, 8), dtype=bool)
        plane[2:6, 2:6] = True

        out = corrupt_mask(plane, np.random.default_rng(0), 0.0, 0.0)

        assert np.array_equal(out, plane)

    def test_corrupt_mask_nibbles(self):
        plane = np.zeros((8, 8), dtype=bool)
        plane[2:6, 2:6] = True

        out = corrupt_mask(plane, np.random.default_rng(0), 0.0, 1.0)

        assert out.sum() == 4
        assert not (out & ~plane).any()


class TestHeatmap:
    def test_three_votes_of_five_is_foreground(self):
        heatmap = Heatmap(np.array([[3.0, 2.0]]), np.array([[5, 5]]))

        assert heatmap.normalized().tolist() == [[0.6, 0.4]]
        assert heatmap.mask().labels.tolist() == [[Label.FOREGROUND, Label.BACKGROUND]]

    def test_exactly_half_is_background(self):
        heatmap = Heatmap(np.array([[1.0]]), np.array([[2]]))

        assert heatmap.mask().labels.tolist() == [[Label.BACKGROUND]]

    def test_uncovered_pixels_normalize_to_zero(self):
        assert Heatmap.zeros((2, 2)).normalized().tolist() == [[0.0, 0.0], [0.0, 0.0]]

    def test_merge_adds(self):
        a = Heatmap(np.ones((2, 2)), np.ones((2, 2), dtype=np.int64))
        a += Heatmap(np.zeros((2, 2)), np.full((2, 2), 3, dtype=np.int64))

        assert a.stack_count.tolist() == [[4, 4], [4, 4]]
        np.testing.assert_allclose(a.normalized(), 0.25)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            Heatmap(np.zeros((2, 2)), np.zeros((2, 3), dtype=np.int64))


class TestRefineNet:
    def test_default_size(self):
        assert 150_000 <= build_refine_net(0).num_parameters() <= 350_000

    def test_output_shape(self):
        logits, _ = _tiny_net().forward(np.zeros((2, 4, 16, 16)))

        assert logits.shape == (2, 2, 16, 16)

    @pytest.mark.parametrize("shape", [(1, 3, 16, 16), (1, 4, 12, 12), (1, 4, 16, 24)])
    def test_rejects_bad_patches(self, shape):
        with pytest.raises(ShapeError):
            _tiny_net().forward(np.zeros(shape))


class TestInference:
    def test_stack_count_at_least_three_per_layer(self):
        image, plane = _image_and_plane()

        for layers in (1, 4):
            heatmap, mask = infer_refine(_tiny_net(), image, plane, layers, seed=3)

            assert heatmap.stack_count.min() >= 3 * layers
            assert np.all((heatmap.vote_sum >= 0) & (heatmap.vote_sum <= heatmap.stack_count))
            values = heatmap.normalized()
            assert values.min() >= 0.0 and values.max() <= 1.0
            assert set(np.unique(mask.labels).tolist()) <= {0, 1}

    def test_constant_network(self):
        net = _tiny_net()
        net.head.weight.value[:] = 0.0
        net.head.bias.value[:] = [-10.0, 10.0]
        image, plane = _image_and_plane()

        heatmap, mask = infer_refine(net, image, plane, 2, seed=0)

        np.testing.assert_allclose(heatmap.normalized(), 1.0, atol=1e-6)
        assert mask.count(Label.FOREGROUND) == 40 * 40

    def test_aligned_tilings_scale_with_layers(self):
        image, plane = _image_and_plane()

        one, _ = infer_refine(_tiny_net(), image, plane, 1, seed=0, randomize=False)
        three, _ = infer_refine(_tiny_net(), image, plane, 3, seed=5, randomize=False)

        assert np.array_equal(three.stack_count, 3 * one.stack_count)
        np.testing.assert_allclose(three.normalized(), one.normalized(), rtol=1e-6)

    def test_same_result_with_threads(self):
        image, plane = _image_and_plane()
        net = _tiny_net()

        serial, _ = infer_refine(net, image, plane, 3, seed=11)
        with BoundedExecutor(max_workers=4) as executor:
            parallel, _ = infer_refine(net, image, plane, 3, seed=11, executor=executor)

        assert np.array_equal(serial.stack_count, parallel.stack_count)
        assert np.array_equal(serial.vote_sum, parallel.vote_sum)

    def test_custom_scales(self):
        image, plane = _image_and_plane(24)

        heatmap, _ = infer_refine(_tiny_net(), image, plane, 2, seed=0, scales=(8,))

        assert heatmap.stack_count.min() >= 2

    def test_rejects_zero_layers(self):
        image, plane = _image_and_plane()

        with pytest.raises(InferenceError, match="l must be ≥ 1"):
            infer_refine(_tiny_net(), image, plane, 0, seed=0)

    def test_other_counts_as_background(self):
        image, plane = _image_and_plane()
        labels = plane.astype(np.uint8)
        labels[0:5, 0:5] = Label.OTHER.value

        from_mask, _ = refine_mask(_tiny_net(), image, LabelMask(labels), 1, seed=2)
        from_plane, _ = refine_mask(_tiny_net(), image, plane, 1, seed=2)

        assert np.array_equal(from_mask.vote_sum, from_plane.vote_sum)


class TestTraining:
    @pytest.fixture
    def pairs(self, small_scene):
        seq, masks = generate_synthetic(small_scene)
        return surrogate_pairs(seq, masks, SbrSettings(), np.random.default_rng(0))

    @pytest.fixture
    def settings(self):
        return SbrSettings(
            scales=(16,), patches_16=4, batch_16=4, micro_batch=2, epochs=2, lr=1e-3
        )

    def test_surrogate_pairs(self, pairs):
        assert len(pairs) == 6
        assert pairs[0].image.shape == (16, 16, 3)
        assert pairs[0].foreground.dtype == bool

    def test_pair_shapes_must_agree(self):
        with pytest.raises(ShapeError):
            TrainingPair(
                np.zeros((4, 4, 3)), np.zeros((4, 5), bool), LabelMask(np.zeros((4, 4), np.uint8))
            )

    def test_training_patches(self):
        image = np.zeros((20, 20, 3), dtype=np.float32)
        labels = np.zeros((20, 20), dtype=np.uint8)
        labels[:, 10:] = Label.OTHER.value
        settings = SbrSettings(patches_16=3)

        patches = sample_training_patches(
            image, np.zeros((20, 20), bool), LabelMask(labels), settings, np.random.default_rng(0)
        )

        assert list(patches) == [16]
        x, y = patches[16]
        assert x.shape == (3, 4, 16, 16)
        assert y.shape == (3, 16, 16)
        assert set(np.unique(y).tolist()) <= {-1, 0}

    def test_train_tiny_net(self, pairs, settings):
        epochs: list[int] = []

        net, losses = train_sbr(
            pairs, settings, seed=0, net=_tiny_net(), on_epoch=lambda e, _: epochs.append(e)
        )

        assert len(losses) == 2
        assert all(np.isfinite(losses))
        assert epochs == [1, 2]
        assert net.num_parameters() == _tiny_net().num_parameters()

    def test_training_is_deterministic(self, pairs, settings):
        a, losses_a = train_sbr(pairs, settings, seed=4, net=_tiny_net())
        b, losses_b = train_sbr(pairs, settings, seed=4, net=_tiny_net())

        assert losses_a == losses_b
        for name, value in a.state_dict().items():
            assert np.array_equal(value, b.state_dict()[name])

    def test_no_pairs(self, settings):
        with pytest.raises(EmptyTrainingSetError):
            train_sbr([], settings, seed=0)

    def test_no_scale_fits(self, pairs):
        with pytest.raises(EmptyTrainingSetError):
            train_sbr(pairs, SbrSettings(scales=(64,)), seed=0, net=_tiny_net())
