"""Tests for near-duplicate pruning and the histogram cache."""

import numpy as np
import pytest

from lts.constants import BIN_COUNT, Label
from lts.exceptions import HistogramCacheError, ShapeError, ValidationError
from lts.hist import euclidean_distance, greedy_keep, load_pool, prune_similar, save_pool
from lts.types.histogram import InstancePool
from lts.utils.concurrency import BoundedExecutor


def _pool(n: int, seed: int = 0, labels: list[int] | None = None) -> InstancePool:
    rng = np.random.default_rng(seed)
    histograms = rng.dirichlet(np.ones(BIN_COUNT), size=(n, 3)).astype(np.float32)
    label_array = np.array(labels if labels is not None else [i % 3 for i in range(n)], np.uint8)
    return InstancePool(histograms=histograms, labels=label_array)


def _spike(bin_: int) -> np.ndarray:
    instance = np.zeros((3, BIN_COUNT), dtype=np.float32)
    instance[:, bin_] = 1.0
    return instance


class TestDistance:
    def test_sum_of_squares_without_root(self):
        a = np.zeros(BIN_COUNT)
        b = np.zeros(BIN_COUNT)
        a[0], b[0], b[1] = 1.0, 0.5, 0.5

        assert euclidean_distance(a, b) == pytest.approx(0.5)

    def test_whole_instances(self):
        assert euclidean_distance(_spike(100), _spike(101)) == pytest.approx(6.0)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            euclidean_distance(np.zeros(3), np.zeros(4))


class TestGreedyKeep:
    def test_first_of_duplicates_survives(self):
        vectors = np.stack([_spike(100), _spike(100), _spike(150), _spike(100)])

        assert greedy_keep(vectors, tau=0.7).tolist() == [0, 2]

    def test_tau_zero_keeps_everything(self):
        vectors = np.stack([_spike(100)] * 4)

        assert greedy_keep(vectors, tau=0.0).tolist() == [0, 1, 2, 3]

    def test_distance_equal_to_tau_is_kept(self):
        vectors = np.stack([_spike(100), _spike(101)])

        assert greedy_keep(vectors, tau=6.0).tolist() == [0, 1]
        assert greedy_keep(vectors, tau=6.0001).tolist() == [0]

    def test_matches_naive_scan_across_blocks(self):
        rng = np.random.default_rng(4)
        base = rng.random((40, 3, 20))
        vectors = base[rng.integers(0, 40, size=700)] + rng.normal(0, 0.01, (700, 3, 20))
        tau = 0.05

        kept: list[int] = []
        for i, v in enumerate(vectors):
            if all(((vectors[k] - v) ** 2).sum() >= tau for k in kept):
                kept.append(i)

        assert greedy_keep(vectors, tau).tolist() == kept


class TestPruneSimilar:
    def test_by_label_keeps_one_per_label(self):
        histograms = np.stack([_spike(100)] * 6)
        pool = InstancePool(histograms=histograms, labels=np.array([0, 1, 0, 2, 1, 0], np.uint8))

        pruned = prune_similar(pool, tau=0.7, by_label=True)

        assert pruned.labels.tolist() == [0, 1, 2]

    def test_global_scan_ignores_labels(self):
        histograms = np.stack([_spike(100)] * 6)
        pool = InstancePool(histograms=histograms, labels=np.array([0, 1, 0, 2, 1, 0], np.uint8))

        pruned = prune_similar(pool, tau=0.7, by_label=False)

        assert pruned.labels.tolist() == [0]

    def test_kept_instances_are_pairwise_distant(self):
        pool = _pool(60)
        tau = float(np.median([euclidean_distance(pool.histograms[0], h) for h in pool.histograms]))

        pruned = prune_similar(pool, tau=tau, by_label=False)

        for i in range(pruned.size):
            for j in range(i + 1, pruned.size):
                assert euclidean_distance(pruned.histograms[i], pruned.histograms[j]) >= tau

    def test_same_result_with_threads(self):
        pool = _pool(90, seed=2)
        tau = 0.012

        serial = prune_similar(pool, tau)
        with BoundedExecutor(max_workers=3) as executor:
            parallel = prune_similar(pool, tau, executor=executor)

        assert np.array_equal(serial.histograms, parallel.histograms)
        assert np.array_equal(serial.labels, parallel.labels)

    def test_rejects_negative_tau(self):
        with pytest.raises(ValidationError, match="tau must be ≥ 0"):
            prune_similar(_pool(3), tau=-1.0)

    def test_empty_pool(self):
        empty = InstancePool(
            histograms=np.zeros((0, 3, BIN_COUNT), np.float32), labels=np.zeros(0, np.uint8)
        )

        assert prune_similar(empty, tau=0.7).size == 0


class TestCache:
    def test_save_then_load(self, tmp_path):
        pool = _pool(7, labels=[0, 1, 2, 2, 1, 0, 1])

        save_pool(pool, tmp_path / "pool.ltsh")
        loaded = load_pool(tmp_path / "pool.ltsh")

        assert np.array_equal(loaded.histograms, pool.histograms)
        assert loaded.labels.tolist() == [0, 1, 2, 2, 1, 0, 1]
        assert loaded.counts()[Label.OTHER] == 2

    def test_header_layout(self, tmp_path):
        save_pool(_pool(2), tmp_path / "pool.ltsh")
        data = (tmp_path / "pool.ltsh").read_bytes()

        assert data[:4] == b"LTSH"
        assert int.from_bytes(data[8:16], "little") == 2
        assert len(data) == 24 + 2 * (1 + 3 * BIN_COUNT * 4)

    def test_wrong_magic(self, tmp_path):
        path = tmp_path / "pool.ltsh"
        save_pool(_pool(2), path)
        path.write_bytes(b"XXXX" + path.read_bytes()[4:])

        with pytest.raises(HistogramCacheError, match="not a histogram cache"):
            load_pool(path)

    def test_truncated(self, tmp_path):
        path = tmp_path / "pool.ltsh"
        save_pool(_pool(2), path)
        path.write_bytes(path.read_bytes()[:-10])

        with pytest.raises(HistogramCacheError):
            load_pool(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(HistogramCacheError):
            load_pool(tmp_path / "absent.ltsh")
