"""Run configuration loading.

Config files are flat ``key = value`` text. Dotted keys address nested settings
(``didl.lr = 0.0001``); ``#`` starts a comment. Values are resolved in the order
defaults < config file < explicit flags.
"""

from collections.abc import Mapping
from pathlib import Path
from typing import Any

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from lts.exceptions import ConfigError
from lts.logging_config import get_logger
from lts.types.config import RunConfig

logger = get_logger(__name__)

_SECTIONS: dict[str, type[BaseModel]] = {
    name: field.annotation  # type: ignore[misc]
    for name, field in RunConfig.model_fields.items()
    if isinstance(field.annotation, type) and issubclass(field.annotation, BaseModel)
}


def parse_config_text(content: str, source: str = "<config>") -> dict[str, str]:
    """
    Parse flat key=value text into a dotted-key mapping.

    Args:
        content: File content
        source: Name used in error messages

    Returns:
        Mapping of dotted keys to raw string values

    Raises:
        ConfigError: If a line is not a key=value pair or a key repeats
    """
    entries: dict[str, str] = {}
    for lineno, raw_line in enumerate(content.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(
                f"{source}:{lineno}: expected 'key = value', got {raw_line.strip()!r}"
            )
        key, value = map(str.strip, line.split("=", 1))
        key = key.replace("-", "_").lower()
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in entries:
            raise ConfigError(f"{source}:{lineno}: duplicate key '{key}'")
        entries[key] = value
    return entries


def _nest(entries: Mapping[str, Any]) -> dict[str, Any]:
    nested: dict[str, Any] = {}
    for key, value in entries.items():
        section, _, name = key.partition(".")
        if name:
            if section not in _SECTIONS:
                raise ConfigError(f"Unknown config section '{section}' in key '{key}'")
            if name not in _SECTIONS[section].model_fields:
                raise ConfigError(f"Unknown config key '{key}'")
            nested.setdefault(section, {})[name] = value
        else:
            if key in _SECTIONS or key not in RunConfig.model_fields:
                raise ConfigError(f"Unknown config key '{key}'")
            nested[key] = value
    return nested


def build_run_config(entries: Mapping[str, Any]) -> RunConfig:
    """
    Build a validated RunConfig from dotted keys.

    Raises:
        ConfigError: On unknown keys or values outside their allowed range
    """
    try:
        return RunConfig(**_nest(entries))
    except PydanticValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg'].removeprefix('Value error, ')}"
            for err in e.errors()
        )
        raise ConfigError(f"Invalid configuration: {problems}") from e


def load_run_config(
    config_path: Path | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> RunConfig:
    """
    Resolve the configuration of a run.

    Args:
        config_path: Optional flat key=value file
        overrides: Dotted keys set by explicit flags; None values are ignored

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: If the file is missing or malformed, or a value is invalid
    """
    entries: dict[str, Any] = {}
    if config_path is not None:
        if not config_path.is_file():
            raise ConfigError(f"Config file '{config_path}' not found")
        try:
            content = config_path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"Cannot read config file '{config_path}': {e}") from e
        entries.update(parse_config_text(content, source=str(config_path)))
        logger.debug(
            f"Loaded {len(entries)} config entries from {config_path}",
            extra={"config_path": str(config_path), "entries": len(entries)},
        )

    for key, value in (overrides or {}).items():
        if value is not None:
            entries[key] = value

    return build_run_config(entries)
