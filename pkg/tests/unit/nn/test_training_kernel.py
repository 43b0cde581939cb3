"""Tests for losses, optimizers and checkpoints."""

import math

import numpy as np
import pytest

from lts.exceptions import CheckpointError, ShapeError, ValidationError
from lts.nn import (
    IGNORE_INDEX,
    Adam,
    Dense,
    Parameter,
    RMSprop,
    decode_state,
    encode_state,
    load_checkpoint,
    log_softmax,
    nll_loss,
    save_checkpoint,
    weighted_cross_entropy,
)


class TestLosses:
    def test_log_softmax_normalizes(self):
        logits = np.array([[1.0, 2.0, 3.0], [1000.0, 1000.0, 1000.0]])

        probs = np.exp(log_softmax(logits))

        np.testing.assert_allclose(probs.sum(axis=1), 1.0)
        np.testing.assert_allclose(probs[1], [1 / 3] * 3)

    def test_uniform_logits_give_ln3(self):
        log_probs = log_softmax(np.zeros((4, 3)))

        loss, grad = nll_loss(log_probs, np.array([0, 1, 2, 1]))

        assert loss == pytest.approx(math.log(3))
        assert grad[0].tolist() == [-0.25, 0.0, 0.0]

    def test_nll_rejects_bad_targets(self):
        with pytest.raises(ValidationError):
            nll_loss(np.zeros((2, 3)), np.array([0, 3]))
        with pytest.raises(ShapeError):
            nll_loss(np.zeros((2, 3)), np.array([0]))

    def test_weighted_cross_entropy_uniform(self):
        logits = np.zeros((1, 2, 2, 2))
        targets = np.array([[[0, 1], [1, 1]]])

        loss, _ = weighted_cross_entropy(logits, targets, (0.2, 0.8))

        assert loss == pytest.approx((0.2 + 3 * 0.8) / 4 * math.log(2))

    def test_equal_weights_halve_plain_cross_entropy(self):
        rng = np.random.default_rng(1)
        logits = rng.normal(size=(2, 2, 3, 3))
        targets = rng.integers(0, 2, size=(2, 3, 3))
        plain, _ = weighted_cross_entropy(logits, targets, (1.0, 1.0))

        loss, _ = weighted_cross_entropy(logits, targets, (0.5, 0.5))

        assert loss == pytest.approx(0.5 * plain)

    def test_all_background_scales_by_background_weight(self):
        rng = np.random.default_rng(2)
        logits = rng.normal(size=(1, 2, 4, 4))
        targets = np.zeros((1, 4, 4), dtype=np.int64)
        plain, plain_grad = weighted_cross_entropy(logits, targets, (1.0, 1.0))

        loss, grad = weighted_cross_entropy(logits, targets, (0.2, 0.8))

        assert loss == pytest.approx(0.2 * plain)
        np.testing.assert_allclose(grad, 0.2 * plain_grad)

    def test_micro_batches_sum_to_full_batch(self):
        rng = np.random.default_rng(3)
        logits = rng.normal(size=(4, 2, 3, 3))
        targets = rng.integers(0, 2, size=(4, 3, 3))
        targets[1, 2, 2] = IGNORE_INDEX
        count = float(np.count_nonzero(targets != IGNORE_INDEX))
        full, _ = weighted_cross_entropy(logits, targets, (0.2, 0.8))

        parts = [
            weighted_cross_entropy(logits[i : i + 2], targets[i : i + 2], (0.2, 0.8), count)[0]
            for i in (0, 2)
        ]

        assert sum(parts) == pytest.approx(full)

    def test_weighted_cross_entropy_gradient(self):
        rng = np.random.default_rng(0)
        logits = rng.normal(size=(2, 2, 3, 3))
        targets = rng.integers(0, 2, size=(2, 3, 3))
        targets[0, 0, 0] = IGNORE_INDEX

        _, grad = weighted_cross_entropy(logits, targets, (0.2, 0.8))

        h = 1e-6
        numeric = np.zeros_like(logits)
        for idx in np.ndindex(logits.shape):
            plus, minus = logits.copy(), logits.copy()
            plus[idx] += h
            minus[idx] -= h
            numeric[idx] = (
                weighted_cross_entropy(plus, targets, (0.2, 0.8))[0]
                - weighted_cross_entropy(minus, targets, (0.2, 0.8))[0]
            ) / (2 * h)
        np.testing.assert_allclose(grad, numeric, atol=1e-7)
        assert np.all(grad[0, :, 0, 0] == 0.0)

    def test_all_ignored(self):
        loss, grad = weighted_cross_entropy(
            np.ones((1, 2, 1, 1)), np.full((1, 1, 1), IGNORE_INDEX), (1.0, 1.0)
        )

        assert loss == 0.0
        assert not grad.any()

    def test_rejects_non_positive_weights(self):
        with pytest.raises(ValidationError):
            weighted_cross_entropy(np.zeros((1, 2, 1, 1)), np.zeros((1, 1, 1), int), (0.0, 1.0))


class TestOptimizers:
    def test_adam_first_step_moves_by_lr(self):
        p = Parameter("w", np.array([1.0, -2.0, 0.5]))
        p.grad[:] = [0.3, -4.0, 1e-3]
        opt = Adam([p], lr=0.01)

        opt.step()

        np.testing.assert_allclose(p.value, [0.99, -1.99, 0.49], atol=1e-6)

    def test_rmsprop_first_step(self):
        p = Parameter("w", np.array([1.0]))
        p.grad[:] = [2.0]
        opt = RMSprop([p], lr=0.001)

        opt.step()

        # sq = 0.01 * g^2, so the step is lr * g / (0.1 * |g|)
        np.testing.assert_allclose(p.value, [1.0 - 0.01], atol=1e-7)

    def test_adam_minimizes_quadratic(self):
        p = Parameter("w", np.array([3.0, -2.0]))
        opt = Adam([p], lr=0.1)

        for _ in range(500):
            opt.zero_grad()
            p.grad += 2 * p.value
            opt.step()

        assert np.abs(p.value).max() < 0.1

    def test_preserves_dtype(self):
        p = Parameter("w", np.ones(2, dtype=np.float32))
        p.grad[:] = 1.0

        Adam([p], lr=0.1).step()

        assert p.value.dtype == np.float32


class TestCheckpoint:
    def test_save_then_load(self, tmp_path):
        rng = np.random.default_rng(0)
        source = Dense("fc", 4, 3, rng)
        target = Dense("fc", 4, 3, np.random.default_rng(1))

        save_checkpoint(source, tmp_path / "model.ltsm")
        load_checkpoint(target, tmp_path / "model.ltsm")

        assert np.array_equal(target.weight.value, source.weight.value)
        assert np.array_equal(target.bias.value, source.bias.value)

    def test_layout(self):
        data = encode_state({"a": np.ones((2, 3), np.float32)})

        assert data[:4] == b"LTSM"
        assert len(data) == 4 + 4 + 4 + (4 + 1) + 4 + 2 * 4 + 6 * 4

    def test_state_order_is_kept(self):
        state = {"z": np.zeros(1), "a": np.ones(2)}

        assert list(decode_state(encode_state(state))) == ["z", "a"]

    def test_wrong_magic(self):
        with pytest.raises(CheckpointError, match="not a checkpoint"):
            decode_state(b"NOPE" + b"\0" * 8)

    def test_truncated(self):
        data = encode_state({"a": np.ones(3)})

        with pytest.raises(CheckpointError, match="truncated"):
            decode_state(data[:-1])

    def test_mismatched_model(self, tmp_path):
        save_checkpoint(Dense("fc", 4, 3, np.random.default_rng(0)), tmp_path / "m.ltsm")

        with pytest.raises(CheckpointError, match="shape"):
            load_checkpoint(Dense("fc", 5, 3, np.random.default_rng(0)), tmp_path / "m.ltsm")
        with pytest.raises(CheckpointError, match="missing"):
            load_checkpoint(Dense("head", 4, 3, np.random.default_rng(0)), tmp_path / "m.ltsm")
