"""Tests for the gradient-check suite."""

import pytest

from lts.core.services.gradients import gradcheck_cases, run_gradcheck_suite


@pytest.fixture(scope="module")
def outcomes():
    return run_gradcheck_suite(seed=0)


class TestGradcheckSuite:
    def test_every_case_passes(self, outcomes):
        failed = [(o.name, o.result.max_relative_error) for o in outcomes if not o.passed]

        assert failed == []

    def test_covers_layers_and_networks(self, outcomes):
        names = [o.name for o in outcomes]

        assert len(names) == len(set(names))
        assert "product layer (improved)" in names
        assert "product layer (skip)" in names
        assert names[-2:] == ["classifier end-to-end", "refine block end-to-end"]

    def test_cases_are_reproducible(self):
        first = [case.loss_fn() for case in gradcheck_cases(3)]
        second = [case.loss_fn() for case in gradcheck_cases(3)]

        assert first == second
