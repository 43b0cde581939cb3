"""Tests for the shared command decorators."""

import inspect
import logging

import pytest
import typer

from lts.exceptions import ConfigError, TrainingError
from lts.logging_config import setup_logging
from lts.types.config import RunConfig
from lts.utils.cli import GlobalOptions, add_global_options, cli_command, start_run_log


class TestGlobalOptions:
    def test_defaults(self):
        assert GlobalOptions().run_config() == RunConfig()

    def test_flags_override_config_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("seed = 5\nthreads = 2\nhistogram.tau = 0.4\n")

        from_file = GlobalOptions(config=path).run_config()
        flagged = GlobalOptions(config=path, seed=9).run_config(**{"histogram.tau": 0.9})

        assert (from_file.seed, from_file.threads, from_file.histogram.tau) == (5, 2, 0.4)
        assert (flagged.seed, flagged.threads, flagged.histogram.tau) == (9, 2, 0.9)

    def test_unset_overrides_are_ignored(self):
        config = GlobalOptions().run_config(**{"histogram.tau": None})

        assert config.histogram.tau == RunConfig().histogram.tau

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="Unknown config"):
            GlobalOptions().run_config(**{"histogram.nope": 1})


class TestAddGlobalOptions:
    def test_requires_options_parameter(self):
        def command(tau: float) -> None: ...

        with pytest.raises(TypeError, match="options"):
            add_global_options(command)

    def test_signature_exposes_global_flags(self):
        @add_global_options
        def command(tau: float, options: GlobalOptions) -> None: ...

        names = list(inspect.signature(command).parameters)

        assert names == ["tau", "config", "seed", "threads", "precision", "verbose", "no_color"]

    def test_bundles_flags(self):
        seen: list[GlobalOptions] = []

        @add_global_options
        def command(options: GlobalOptions) -> None:
            seen.append(options)

        command(seed=3, threads=None, precision="f64")

        assert seen == [GlobalOptions(seed=3, precision="f64")]


class TestCliCommand:
    @pytest.mark.parametrize(
        ("error", "code"),
        [(TrainingError("bad"), 1), (RuntimeError("boom"), 1), (KeyboardInterrupt(), 130)],
    )
    def test_exit_codes(self, error, code):
        @cli_command
        def command() -> None:
            raise error

        with pytest.raises(typer.Exit) as exc_info:
            command()

        assert exc_info.value.exit_code == code

    def test_bad_parameter_passes_through(self):
        @cli_command
        def command() -> None:
            raise typer.BadParameter("tau must be ≥ 0")

        with pytest.raises(typer.BadParameter):
            command()

    def test_returns_value(self):
        assert cli_command(lambda: 4)() == 4


class TestRunLog:
    def test_header_lists_settings(self, tmp_path):
        setup_logging(level="INFO")
        handler = start_run_log(tmp_path, "prune", RunConfig(seed=11))
        handler.close()
        logging.getLogger("lts").removeHandler(handler)

        text = (tmp_path / "run.log").read_text()

        assert "lts prune (seed=11)" in text
        assert "histogram.tau = 0.7" in text
