"""Tests for the pipeline operations, run through OperationRunner."""

import json

import numpy as np
import pytest

from lts.constants import DEFAULT_GT_VALUE_MAP, Label
from lts.core.operations import (
    EvaluateOperation,
    ExtractHistogramsOperation,
    GradcheckOperation,
    InferMaskOperation,
    OperationContext,
    OperationRunner,
    PruneHistogramsOperation,
    RefineOperation,
    SynthesizeSceneOperation,
    TrainDidlOperation,
    TrainSbrOperation,
    VerifyProductOperation,
)
from lts.core.operations.sbr import discover_corpus
from lts.exceptions import FrameIndexError, HistogramCacheError
from lts.hist import load_pool
from lts.videoio.masks import read_mask, write_mask


def _run(operation, config):
    return OperationRunner(operation, silent=True).run(OperationContext(config=config))


@pytest.fixture
def pool_file(tmp_path, scene_dir, tiny_config):
    path = tmp_path / "pool.ltsh"
    result = _run(
        ExtractHistogramsOperation(scene_dir / "input", scene_dir / "groundtruth", path),
        tiny_config,
    )
    assert result.is_success(), result.message
    return path


@pytest.fixture
def didl_file(tmp_path, pool_file, tiny_config):
    path = tmp_path / "didl.ltsm"
    result = _run(TrainDidlOperation(pool_file, path, tmp_path / "didl.csv"), tiny_config)
    assert result.is_success(), result.message
    return path


@pytest.fixture
def sbr_file(tmp_path, scene_dir, tiny_config):
    path = tmp_path / "sbr.ltsm"
    result = _run(TrainSbrOperation(scene_dir, path), tiny_config)
    assert result.is_success(), result.message
    return path


class TestSynthesize:
    def test_writes_scene(self, tmp_path, small_scene, run_config):
        result = _run(SynthesizeSceneOperation(small_scene, tmp_path / "scene"), run_config)

        assert result.is_success()
        frames_dir, gt_dir = result.data
        assert len(list(frames_dir.glob("in*.png"))) == 6
        assert len(list(gt_dir.glob("gt*.png"))) == 6


class TestHistogramOperations:
    def test_extract_writes_cache(self, pool_file):
        pool = load_pool(pool_file)

        # default stride keeps only the first reference frame
        assert pool.size == 16 * 16
        assert pool.counts()[Label.FOREGROUND] == 16

    def test_prune_shrinks_pool(self, tmp_path, pool_file, tiny_config):
        result = _run(PruneHistogramsOperation(pool_file, tmp_path / "pruned.ltsh"), tiny_config)

        assert result.is_success()
        pruned = load_pool(tmp_path / "pruned.ltsh")
        assert 0 < pruned.size < load_pool(pool_file).size
        assert result.data.size == pruned.size

    def test_prune_missing_pool(self, tmp_path, tiny_config):
        result = _run(
            PruneHistogramsOperation(tmp_path / "absent.ltsh", tmp_path / "out.ltsh"), tiny_config
        )

        assert result.is_failure()
        assert isinstance(result.error, HistogramCacheError)

    def test_extract_without_ground_truth(self, tmp_path, scene_dir, tiny_config):
        result = _run(
            ExtractHistogramsOperation(scene_dir / "input", tmp_path / "nowhere", tmp_path / "p"),
            tiny_config,
        )

        assert result.is_failure()


class TestDidlOperations:
    def test_training_writes_model_and_report(self, tmp_path, didl_file):
        assert didl_file.read_bytes()[:4] == b"LTSM"
        lines = (tmp_path / "didl.csv").read_text().splitlines()
        assert lines[0] == "iteration,subset_size,accuracy,defects"
        assert len(lines) == 3

    def test_training_needs_pool(self, tmp_path, tiny_config):
        result = _run(
            TrainDidlOperation(tmp_path / "absent", tmp_path / "m", tmp_path / "r.csv"), tiny_config
        )

        assert result.is_failure()
        assert "Histogram pool not found" in result.message

    def test_infer_writes_mask(self, tmp_path, scene_dir, didl_file, tiny_config):
        out = tmp_path / "mask.png"

        result = _run(InferMaskOperation(didl_file, scene_dir / "input", 2, out), tiny_config)

        assert result.is_success()
        assert read_mask(out).shape == (16, 16)

    def test_infer_out_of_range_frame(self, tmp_path, scene_dir, didl_file, tiny_config):
        result = _run(
            InferMaskOperation(didl_file, scene_dir / "input", 6, tmp_path / "m.png"), tiny_config
        )

        assert result.is_failure()
        assert isinstance(result.error, FrameIndexError)


class TestSbrOperations:
    def test_discover_corpus(self, tmp_path, scene_dir):
        assert discover_corpus(scene_dir) == [scene_dir]
        assert discover_corpus(tmp_path) == [scene_dir]

    def test_training_writes_checkpoint(self, sbr_file):
        assert sbr_file.read_bytes()[:4] == b"LTSM"

    def test_training_with_classifier_masks(self, tmp_path, scene_dir, didl_file, tiny_config):
        result = _run(
            TrainSbrOperation(scene_dir, tmp_path / "sbr2.ltsm", didl_path=didl_file), tiny_config
        )

        assert result.is_success(), result.message
        assert len(result.data) == 1

    def test_training_on_empty_corpus(self, tmp_path, tiny_config):
        (tmp_path / "empty").mkdir()

        result = _run(TrainSbrOperation(tmp_path / "empty", tmp_path / "s.ltsm"), tiny_config)

        assert result.is_failure()

    def test_refine_a_mask_file(self, tmp_path, scene_dir, sbr_file, tiny_config):
        mask_path = tmp_path / "initial.png"
        gt = read_mask(scene_dir / "groundtruth" / "gt000003.png", DEFAULT_GT_VALUE_MAP)
        write_mask(gt, mask_path)

        result = _run(
            RefineOperation(
                sbr_file,
                scene_dir / "input",
                2,
                tmp_path / "refined.png",
                mask_path=mask_path,
                heatmap_path=tmp_path / "heat.png",
            ),
            tiny_config,
        )

        assert result.is_success(), result.message
        heatmap, refined = result.data
        assert heatmap.stack_count.min() >= 1
        assert np.array_equal(read_mask(tmp_path / "refined.png").labels, refined.labels)
        assert (tmp_path / "heat.png").is_file()

    def test_refine_classifier_output(self, tmp_path, scene_dir, sbr_file, didl_file, tiny_config):
        result = _run(
            RefineOperation(
                sbr_file, scene_dir / "input", 0, tmp_path / "r.png", didl_path=didl_file
            ),
            tiny_config,
        )

        assert result.is_success(), result.message

    def test_refine_needs_exactly_one_source(self, tmp_path, scene_dir, sbr_file, tiny_config):
        result = _run(
            RefineOperation(sbr_file, scene_dir / "input", 0, tmp_path / "r.png"), tiny_config
        )

        assert result.is_failure()
        assert "exactly one" in result.message


class TestEvaluateOperation:
    def test_scores_ground_truth_against_itself(self, tmp_path, scene_dir, run_config):
        pred_dir = tmp_path / "pred" / "scene"
        for index in range(1, 7):
            gt = read_mask(scene_dir / "groundtruth" / f"gt{index:06d}.png", DEFAULT_GT_VALUE_MAP)
            write_mask(gt, pred_dir / f"bin{index:06d}.png")

        result = _run(
            EvaluateOperation(tmp_path / "pred", tmp_path, tmp_path / "report.csv"), run_config
        )

        assert result.is_success(), result.message
        scores, summary = result.data
        assert summary.overall == 1.0
        assert scores[0].frames_scored == 6
        assert (tmp_path / "report_summary.csv").is_file()

    def test_missing_directories(self, tmp_path, run_config):
        result = _run(
            EvaluateOperation(tmp_path / "a", tmp_path / "b", tmp_path / "r.csv"), run_config
        )

        assert result.is_failure()
        assert "Prediction directory not found" in result.message
        assert "Ground-truth directory not found" in result.message


class TestVerificationOperations:
    def test_verify_product_writes_outputs(self, tmp_path, run_config):
        result = _run(VerifyProductOperation(20_000, tmp_path / "verify"), run_config)

        assert result.is_success()
        report = json.loads((tmp_path / "verify" / "verification.json").read_text())
        assert report["zero_bin"]["samples"] == 20_000
        assert (tmp_path / "verify" / "zero_bin_product.csv").is_file()
        assert (tmp_path / "verify" / "divergent_product.csv").is_file()

    def test_verify_product_needs_samples(self, tmp_path, run_config):
        result = _run(VerifyProductOperation(0, tmp_path), run_config)

        assert result.is_failure()

    def test_gradcheck_passes(self, run_config):
        result = _run(GradcheckOperation(), run_config)

        assert result.is_success(), result.message
        assert all(outcome.passed for outcome in result.data)
