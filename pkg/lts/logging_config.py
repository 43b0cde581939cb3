"""Logging configuration for LTS.

This module sets up structured logging with proper handlers, formatters,
and log levels for the entire application.
"""

import logging
import sys
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from rich.console import Console
from rich.logging import RichHandler

# Global console for rich output
console = Console()

_FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"


def setup_logging(
    level: str = "INFO",
    log_file: Path | None = None,
    enable_rich: bool = True,
    console_output: bool = False,
) -> logging.Logger:
    """
    Configure logging for the application.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional path to write logs to file
        enable_rich: Whether to use Rich for console output
        console_output: Whether to show logs on console (False = only operation descriptions)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger("lts")
    logger.setLevel(getattr(logging, level.upper()))

    # Remove any existing handlers
    for handler in list(logger.handlers):
        handler.close()
    logger.handlers.clear()

    if console_output:
        console_handler: logging.Handler
        if enable_rich:
            console_handler = RichHandler(
                console=console,
                show_time=True,
                show_path=False,
                rich_tracebacks=True,
                tracebacks_show_locals=False,
            )
        else:
            console_handler = logging.StreamHandler(sys.stdout)
            console_handler.setFormatter(
                logging.Formatter(
                    "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                    datefmt="%Y-%m-%d %H:%M:%S",
                )
            )
        console_handler.setLevel(logging.DEBUG if level.upper() == "DEBUG" else logging.INFO)
        logger.addHandler(console_handler)

    if log_file:
        attach_log_file(log_file)

    return logger


def attach_log_file(log_file: Path) -> logging.Handler:
    """
    Add a DEBUG-level file handler to the application logger.

    Args:
        log_file: Destination file, created with its parent directories

    Returns:
        The attached handler
    """
    log_file.parent.mkdir(parents=True, exist_ok=True)
    file_handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(_FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    logging.getLogger("lts").addHandler(file_handler)
    return file_handler


def log_run_header(command: str, settings: Mapping[str, Any], seed: int) -> None:
    """
    Write the resolved configuration of a command to the log.

    Every tunable is listed so that a run can be repeated from its log alone.

    Args:
        command: Subcommand name
        settings: Flattened resolved configuration
        seed: Seed driving every stochastic stage of the run
    """
    logger = get_logger("run")
    logger.info(f"lts {command} (seed={seed})", extra={"command": command, "seed": seed})
    for key in sorted(settings):
        logger.info(f"  {key} = {settings[key]}")


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for a specific module.

    Args:
        name: Name of the logger (typically __name__)

    Returns:
        Logger instance
    """
    if name == "lts" or name.startswith("lts."):
        return logging.getLogger(name)
    return logging.getLogger(f"lts.{name}")
