"""Decorators and helpers shared by every command."""

import inspect
import logging
from collections.abc import Callable
from dataclasses import dataclass
from functools import wraps
from pathlib import Path
from typing import Any, TypeVar

import typer

from lts.constants import DEFAULT_LOG_LEVEL, RUN_LOG_NAME
from lts.core.config import load_run_config
from lts.exceptions import LtsError
from lts.logging_config import attach_log_file, console, get_logger, log_run_header, setup_logging
from lts.types.config import RunConfig
from lts.validation import ValidationRules, for_typer

logger = get_logger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class GlobalOptions:
    """Flags accepted by every command; unset values leave the config untouched."""

    config: Path | None = None
    seed: int | None = None
    threads: int | None = None
    precision: str | None = None
    verbose: bool = False
    no_color: bool = False

    def run_config(self, **overrides: Any) -> RunConfig:
        """
        Resolve defaults < config file < flags.

        Args:
            overrides: Dotted config keys set by command flags; None values are ignored

        Raises:
            ConfigError: On an unreadable file, unknown keys or invalid values
        """
        flags = {"seed": self.seed, "threads": self.threads, "precision": self.precision}
        return load_run_config(self.config, {**flags, **overrides})


def _global_parameters() -> list[inspect.Parameter]:
    def option(name: str, annotation: Any, default: Any) -> inspect.Parameter:
        return inspect.Parameter(
            name, inspect.Parameter.KEYWORD_ONLY, default=default, annotation=annotation
        )

    return [
        option(
            "config",
            Path | None,
            typer.Option(
                None,
                "--config",
                help="Flat key = value configuration file",
                callback=for_typer(ValidationRules.existing_file("config")),
            ),
        ),
        option(
            "seed",
            int | None,
            typer.Option(
                None,
                "--seed",
                help="Seed of every random stage",
                callback=for_typer(ValidationRules.seed()),
            ),
        ),
        option(
            "threads",
            int | None,
            typer.Option(
                None,
                "--threads",
                help="Maximum worker threads",
                callback=for_typer(ValidationRules.threads()),
            ),
        ),
        option(
            "precision",
            str | None,
            typer.Option(
                None,
                "--precision",
                help="Floating-point precision: f32 or f64",
                callback=for_typer(ValidationRules.precision()),
            ),
        ),
        option(
            "verbose",
            bool,
            typer.Option(False, "--verbose", help="Enable verbose logging output"),
        ),
        option("no_color", bool, typer.Option(False, "--no-color", help="Disable colored output")),
    ]


def add_global_options(func: Callable[..., T]) -> Callable[..., T]:
    """
    Decorator that adds --config, --seed, --threads, --precision, --verbose
    and --no-color to a command.

    The decorated function receives them bundled as `options: GlobalOptions`,
    which must be one of its parameters.

    Usage:
        @add_global_options
        @cli_command
        def prune_command(..., options: GlobalOptions) -> None:
            config = options.run_config(**{"histogram.tau": tau})
    """
    signature = inspect.signature(func)
    if "options" not in signature.parameters:
        raise TypeError(f"{func.__name__} must accept an 'options' parameter")
    own = [p for name, p in signature.parameters.items() if name != "options"]
    extra = _global_parameters()

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> T:
        config_path = kwargs.pop("config", None)
        options = GlobalOptions(
            config=Path(config_path) if config_path else None,
            seed=kwargs.pop("seed", None),
            threads=kwargs.pop("threads", None),
            precision=kwargs.pop("precision", None),
            verbose=kwargs.pop("verbose", False),
            no_color=kwargs.pop("no_color", False),
        )
        setup_logging(
            level="DEBUG" if options.verbose else DEFAULT_LOG_LEVEL,
            enable_rich=not options.no_color,
            console_output=options.verbose,
        )
        console.no_color = options.no_color
        return func(*args, options=options, **kwargs)

    wrapper.__signature__ = signature.replace(parameters=own + extra)  # type: ignore[attr-defined]
    annotations = {k: v for k, v in func.__annotations__.items() if k != "options"}
    wrapper.__annotations__ = {**annotations, **{p.name: p.annotation for p in extra}}
    return wrapper


def cli_command(func: Callable[..., T]) -> Callable[..., T]:
    """
    Decorator for CLI commands with consistent error handling and logging.

    - typer exits and bad parameters: passed through to typer
    - LtsError: one-line diagnostic, exit code 1
    - KeyboardInterrupt: exit code 130
    - anything else: logged with traceback, exit code 1
    """

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> T:
        try:
            return func(*args, **kwargs)
        except (typer.Exit, typer.Abort, typer.BadParameter):
            raise
        except LtsError as e:
            logger.error(f"Command failed: {e}")
            console.print(f"[red]x {e}[/red]")
            raise typer.Exit(code=1) from e
        except KeyboardInterrupt:
            logger.info("Command interrupted by user")
            console.print("\n[yellow]** Operation cancelled by user[/yellow]")
            raise typer.Exit(code=130) from None
        except Exception as e:
            logger.error(f"Unexpected error: {e}", exc_info=True)
            console.print(f"[red]x Unexpected error: {e}[/red]")
            console.print("[dim]Run with --verbose for the full traceback[/dim]")
            raise typer.Exit(code=1) from e

    return wrapper


def start_run_log(directory: Path, command: str, config: RunConfig) -> logging.Handler:
    """
    Attach `run.log` in `directory` and write the run header to it.

    Returns:
        The attached file handler
    """
    handler = attach_log_file(directory / RUN_LOG_NAME)
    log_run_header(command, config.flatten(), config.seed)
    return handler
