"""Tests for the distribution-learning classifier."""

import csv

import numpy as np
import pytest

from lts.constants import BIN_COUNT, Label
from lts.didl import (
    TrainReport,
    build_model,
    classify_histograms,
    defect_iterate,
    initial_subset,
    predict_mask,
    train_epochs,
    validate_and_collect_defects,
)
from lts.exceptions import EmptyTrainingSetError, ShapeError, TrainingError
from lts.hist import extract_pool
from lts.types.config import DidlSettings
from lts.types.histogram import InstancePool
from lts.types.video import MaskProvenance
from lts.utils.concurrency import BoundedExecutor
from lts.videoio.synthetic import generate_synthetic

TINY = DidlSettings(
    product_kernels=2,
    sum_kernels=2,
    mix_channels=3,
    hidden_units=8,
    batch=64,
    lr=1e-3,
    first_epochs=2,
    later_epochs=1,
    iterations=3,
    initial_fraction=0.3,
)


@pytest.fixture
def scene_pool(small_scene) -> InstancePool:
    seq, masks = generate_synthetic(small_scene)
    return extract_pool(seq, masks, stride=2)


def _random_pool(labels: list[int], seed: int = 0) -> InstancePool:
    rng = np.random.default_rng(seed)
    histograms = rng.dirichlet(np.ones(BIN_COUNT), size=(len(labels), 3))
    return InstancePool(histograms=histograms.astype(np.float32), labels=np.array(labels, np.uint8))


class TestModel:
    def test_same_seed_same_weights(self):
        a = build_model(5, TINY)
        b = build_model(5, TINY)

        for (name, x), y in zip(a.state_dict().items(), b.state_dict().values()):
            assert np.array_equal(x, y), name

    def test_default_size(self):
        assert build_model(0).num_parameters() < 500_000

    def test_log_probabilities(self):
        model = build_model(1, TINY)
        mass = np.random.default_rng(1).dirichlet(np.ones(BIN_COUNT), size=(4, 3))

        log_probs = model.log_probabilities(mass)

        assert log_probs.shape == (4, 3)
        np.testing.assert_allclose(np.exp(log_probs).sum(axis=1), 1.0, rtol=1e-5)

    @pytest.mark.parametrize("shape", [(0, 3, BIN_COUNT), (2, 1, BIN_COUNT), (2, 3, 50)])
    def test_rejects_bad_batches(self, shape):
        with pytest.raises(ShapeError):
            build_model(0, TINY).forward(np.zeros(shape))

    def test_kernels_start_as_unit_mass_bumps(self):
        model = build_model(2, TINY)

        kernels = model.product.kernels.value[:, :BIN_COUNT]

        np.testing.assert_allclose(kernels.sum(axis=1) * 0.01, 1.0, rtol=1e-5)


class TestTrainReport:
    def test_csv_columns(self, tmp_path):
        report = TrainReport()
        report.record(10, 0.5, 5, [1.0, 0.8])
        report.record(15, 0.75, 2, [0.6])

        report.write_csv(tmp_path / "report.csv")

        with (tmp_path / "report.csv").open() as f:
            rows = list(csv.DictReader(f))
        assert list(rows[0]) == ["iteration", "subset_size", "accuracy", "defects"]
        assert rows[1] == {
            "iteration": "2",
            "subset_size": "15",
            "accuracy": "0.75",
            "defects": "2",
        }

    def test_subset_may_not_shrink(self):
        report = TrainReport()
        report.record(10, 0.5, 5, [])

        with pytest.raises(TrainingError):
            report.record(9, 0.6, 3, [])


class TestTraining:
    def test_initial_subset_whole_pool(self):
        pool = _random_pool([0] * 20 + [1])

        chosen = initial_subset(pool, 1.0, 5.0, np.random.default_rng(0))

        assert chosen.tolist() == list(range(21))

    def test_initial_subset_caps_background(self):
        pool = _random_pool([0] * 300 + [1] * 20 + [2] * 30)

        chosen = initial_subset(pool, 0.5, 2.0, np.random.default_rng(0))
        labels = pool.labels[chosen]

        foreground = int((labels == Label.FOREGROUND).sum())
        assert foreground > 0
        assert int((labels == Label.BACKGROUND).sum()) <= 2 * foreground
        assert np.all(np.diff(chosen) > 0)

    def test_zero_epochs_leave_model_untouched(self, scene_pool):
        model = build_model(0, TINY)
        before = model.state_dict()

        losses = train_epochs(
            model, scene_pool, np.arange(10), 0, 1e-3, 8, np.random.default_rng(0)
        )

        assert losses == []
        for name, value in model.state_dict().items():
            assert np.array_equal(value, before[name])

    def test_empty_subset(self, scene_pool):
        with pytest.raises(EmptyTrainingSetError):
            train_epochs(
                build_model(0, TINY), scene_pool, np.array([], int), 1, 1e-3, 8,
                np.random.default_rng(0),
            )

    def test_loss_goes_down(self, scene_pool):
        model = build_model(0, TINY)
        epochs: list[int] = []

        losses = train_epochs(
            model,
            scene_pool,
            np.arange(scene_pool.size),
            15,
            1e-2,
            scene_pool.size,
            np.random.default_rng(0),
            on_epoch=lambda epoch, _: epochs.append(epoch),
        )

        assert losses[-1] < losses[0]
        assert epochs == list(range(1, 16))

    def test_defects_are_misclassified_instances(self, scene_pool):
        model = build_model(3, TINY)

        accuracy, defects = validate_and_collect_defects(model, scene_pool, batch=50)

        predicted = classify_histograms(model, scene_pool.histograms, batch=50)
        assert defects.tolist() == np.flatnonzero(predicted != scene_pool.labels).tolist()
        assert accuracy == pytest.approx(1 - defects.size / scene_pool.size)

    def test_threads_do_not_change_labels(self, scene_pool):
        model = build_model(4, TINY)

        serial = classify_histograms(model, scene_pool.histograms, batch=37)
        with BoundedExecutor(max_workers=3) as executor:
            parallel = classify_histograms(model, scene_pool.histograms, 37, executor)

        assert np.array_equal(serial, parallel)


class TestDefectIteration:
    def test_subset_grows_by_defects(self, scene_pool):
        _, report = defect_iterate(scene_pool, TINY, seed=0)

        assert report.iterations == 3
        assert report.subset_sizes == sorted(report.subset_sizes)
        assert [len(losses) for losses in report.epoch_losses] == [2, 1, 1]
        assert all(0.0 <= a <= 1.0 for a in report.accuracies)

    def test_deterministic(self, scene_pool):
        model_a, report_a = defect_iterate(scene_pool, TINY, seed=9)
        model_b, report_b = defect_iterate(scene_pool, TINY, seed=9)

        assert report_a.rows() == report_b.rows()
        for name, value in model_a.state_dict().items():
            assert np.array_equal(value, model_b.state_dict()[name])

    def test_empty_pool(self):
        empty = InstancePool(
            histograms=np.zeros((0, 3, BIN_COUNT), np.float32), labels=np.zeros(0, np.uint8)
        )

        with pytest.raises(EmptyTrainingSetError):
            defect_iterate(empty, TINY, seed=0)


class TestPredictMask:
    def test_labels_every_pixel(self, small_scene):
        seq, _ = generate_synthetic(small_scene)

        mask = predict_mask(build_model(0, TINY), seq, t=2, batch=100)

        assert mask.labels.shape == (16, 16)
        assert mask.provenance is MaskProvenance.PREDICTED
        assert set(np.unique(mask.labels).tolist()) <= {0, 1, 2}
