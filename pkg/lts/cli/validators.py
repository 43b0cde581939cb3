"""Input validators for CLI commands.

Typer callbacks built from the rules in lts.validation.rules, so that flags
and configuration files reject the same values with the same messages.
"""

from pathlib import Path

from lts.validation import ValidationRules, for_typer


def validate_existing_file(value: str | Path | None) -> Path | None:
    """Uses: ValidationRules.existing_file()"""
    if value is None:
        return None
    return Path(for_typer(ValidationRules.existing_file())(value))


def validate_existing_dir(value: str | Path | None) -> Path | None:
    """Uses: ValidationRules.existing_dir()"""
    if value is None:
        return None
    return Path(for_typer(ValidationRules.existing_dir())(value))


def validate_tau(value: float | None) -> float | None:
    """
    Validate the pruning threshold.

    Uses: ValidationRules.tau()
    Rules: See lts.validation.rules.ValidationRules.tau()
    """
    return for_typer(ValidationRules.tau())(value)  # type: ignore[no-any-return]


def validate_stride(value: int | None) -> int | None:
    return for_typer(ValidationRules.stride())(value)  # type: ignore[no-any-return]


def validate_frame_index(value: int | None) -> int | None:
    return for_typer(ValidationRules.frame_index())(value)  # type: ignore[no-any-return]


def validate_initial_fraction(value: float | None) -> float | None:
    return for_typer(ValidationRules.initial_fraction())(value)  # type: ignore[no-any-return]


def validate_iterations(value: int | None) -> int | None:
    return for_typer(ValidationRules.iterations())(value)  # type: ignore[no-any-return]


def validate_epochs(value: int | None) -> int | None:
    return for_typer(ValidationRules.epochs())(value)  # type: ignore[no-any-return]


def validate_frame_stride(value: int | None) -> int | None:
    return for_typer(ValidationRules.count("frame-stride"))(value)  # type: ignore[no-any-return]


def validate_coverage_layers(value: int | None) -> int | None:
    """
    Validate the number of coverage layers per scale.

    Uses: ValidationRules.coverage_layers()
    """
    return for_typer(ValidationRules.coverage_layers())(value)  # type: ignore[no-any-return]


def validate_samples(value: int | None) -> int | None:
    return for_typer(ValidationRules.samples())(value)  # type: ignore[no-any-return]


def validate_sigma(value: float | None) -> float | None:
    return for_typer(ValidationRules.sigma())(value)  # type: ignore[no-any-return]


def validate_height(value: int | None) -> int | None:
    return for_typer(ValidationRules.dimension("height"))(value)  # type: ignore[no-any-return]


def validate_width(value: int | None) -> int | None:
    return for_typer(ValidationRules.dimension("width"))(value)  # type: ignore[no-any-return]


def validate_frame_count(value: int | None) -> int | None:
    return for_typer(ValidationRules.dimension("frames"))(value)  # type: ignore[no-any-return]


def validate_square(value: int | None) -> int | None:
    return for_typer(ValidationRules.dimension("square"))(value)  # type: ignore[no-any-return]
