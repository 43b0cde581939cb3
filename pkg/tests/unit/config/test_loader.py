"""Tests for run configuration loading."""

import numpy as np
import pytest

from lts.core.config import build_run_config, load_run_config, parse_config_text
from lts.exceptions import ConfigError
from lts.types.config import RunConfig, ZeroBinRule


class TestParseConfigText:
    def test_flat_pairs_and_comments(self):
        entries = parse_config_text(
            """
            # pruning
            histogram.tau = 0.5
            seed=3   # trailing comment
            didl.zero-bin-rule = skip
            """
        )

        assert entries == {"histogram.tau": "0.5", "seed": "3", "didl.zero_bin_rule": "skip"}

    def test_rejects_line_without_equals(self):
        with pytest.raises(ConfigError, match="cfg:2"):
            parse_config_text("seed = 1\nthreads 4\n", source="cfg")

    def test_rejects_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate key 'seed'"):
            parse_config_text("seed = 1\nseed = 2\n")


class TestBuildRunConfig:
    def test_defaults(self):
        config = build_run_config({})

        assert config == RunConfig()
        assert config.histogram.tau == 0.7
        assert config.histogram.bins == 201
        assert config.didl.iterations == 4
        assert config.didl.zero_bin_rule is ZeroBinRule.IMPROVED
        assert config.sbr.scales == (16, 32, 64)
        assert config.sbr.l == 32
        assert config.dtype is np.float32

    def test_nested_keys(self):
        config = build_run_config(
            {
                "didl.lr": "0.001",
                "sbr.scales": "64,16",
                "precision": "f64",
                "sbr.randomize": "false",
            }
        )

        assert config.didl.lr == 0.001
        assert config.sbr.scales == (16, 64)
        assert config.sbr.randomize is False
        assert config.dtype is np.float64

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="Unknown config key 'didl.momentum'"):
            build_run_config({"didl.momentum": "0.9"})

    def test_unknown_section(self):
        with pytest.raises(ConfigError, match="Unknown config section 'gmm'"):
            build_run_config({"gmm.k": "3"})

    def test_invalid_value_carries_rule_message(self):
        with pytest.raises(ConfigError, match="tau must be ≥ 0"):
            build_run_config({"histogram.tau": "-1"})

    def test_invalid_scale(self):
        with pytest.raises(ConfigError, match="multiple of 8"):
            build_run_config({"sbr.scales": "12"})


class TestLoadRunConfig:
    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("seed = 5\nthreads = 2\nhistogram.tau = 0.3\n")

        config = load_run_config(path, {"seed": 9, "threads": None})

        assert config.seed == 9
        assert config.threads == 2
        assert config.histogram.tau == 0.3

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_run_config(tmp_path / "absent.cfg")

    def test_flatten_lists_every_key(self):
        flat = RunConfig().flatten()

        assert flat["histogram.tau"] == 0.7
        assert flat["sbr.scales"] == "16,32,64"
        assert flat["didl.zero_bin_rule"] == "improved"
        assert flat["seed"] == 0

    def test_flatten_round_trips_through_build(self):
        config = build_run_config({"seed": "4", "sbr.l": "8", "didl.zero_bin_rule": "skip"})

        assert build_run_config(config.flatten()) == config
