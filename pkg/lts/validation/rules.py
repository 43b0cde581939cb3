"""Central validation rules for all LTS tunables.

This module defines validation logic once and provides it in multiple formats.
Config files (pydantic) and command-line flags (typer) share these rules and
therefore share their messages.
"""

from lts.constants import BIN_COUNT, BIN_WIDTH, SBR_PATCH_MULTIPLE
from lts.utils.validators import NumberBuilder, PathBuilder, StringBuilder, ValidatorBuilder


class ValidationRules:
    """
    Central repository of all validation rules.

    Each method returns a ValidatorBuilder that can be adapted for:
    - Pydantic (config files)
    - Typer (CLI arguments)

    Usage:
        from lts.validation import for_pydantic, for_typer

        validate_tau = for_pydantic(ValidationRules.tau())
        tau_callback = for_typer(ValidationRules.tau())
    """

    # ============================================================
    # Histogram grid and pruning
    # ============================================================

    @staticmethod
    def bins() -> NumberBuilder[int]:
        """The grid layout is fixed; the value is accepted only to be recorded."""
        return ValidatorBuilder.integer("bins").equals(BIN_COUNT)

    @staticmethod
    def delta() -> NumberBuilder[float]:
        return ValidatorBuilder.floating("delta").equals(BIN_WIDTH)

    @staticmethod
    def tau() -> NumberBuilder[float]:
        """
        Validate the pruning threshold.

        Rules:
        - Must be a finite number ≥ 0
        """
        return ValidatorBuilder.floating("tau").finite().min(0)

    @staticmethod
    def stride() -> NumberBuilder[int]:
        return ValidatorBuilder.integer("stride").min(1)

    @staticmethod
    def frame_index() -> NumberBuilder[int]:
        return ValidatorBuilder.integer("t").min(0)

    # ============================================================
    # Training
    # ============================================================

    @staticmethod
    def learning_rate(name: str = "lr") -> NumberBuilder[float]:
        return ValidatorBuilder.floating(name).finite().positive()

    @staticmethod
    def batch_size(name: str = "batch") -> NumberBuilder[int]:
        return ValidatorBuilder.integer(name).min(1)

    @staticmethod
    def epochs(name: str = "epochs") -> NumberBuilder[int]:
        return ValidatorBuilder.integer(name).min(0)

    @staticmethod
    def iterations() -> NumberBuilder[int]:
        return ValidatorBuilder.integer("iterations").min(1)

    @staticmethod
    def initial_fraction() -> NumberBuilder[float]:
        """
        Validate the share of the pool used for the first training subset.

        Rules:
        - 0 < fraction ≤ 1
        """
        return (
            ValidatorBuilder.floating("initial_fraction")
            .check(lambda f: f > 0, "initial_fraction must be > 0")
            .max(1)
        )

    @staticmethod
    def count(name: str) -> NumberBuilder[int]:
        return ValidatorBuilder.integer(name).min(1)

    @staticmethod
    def ratio(name: str) -> NumberBuilder[float]:
        return ValidatorBuilder.floating(name).finite().positive()

    @staticmethod
    def class_weight(name: str) -> NumberBuilder[float]:
        """Loss weights must be strictly positive."""
        return ValidatorBuilder.floating(name).finite().positive()

    @staticmethod
    def probability(name: str) -> NumberBuilder[float]:
        return ValidatorBuilder.floating(name).min(0).max(1)

    @staticmethod
    def zero_bin_rule() -> StringBuilder:
        return ValidatorBuilder.string("zero_bin_rule").strip().lower().one_of(["improved", "skip"])

    # ============================================================
    # Refinement
    # ============================================================

    @staticmethod
    def coverage_layers() -> NumberBuilder[int]:
        """
        Validate the number of coverage layers per scale.

        Rules:
        - Must be ≥ 1 so every pixel receives at least one vote per scale
        """
        return ValidatorBuilder.integer("l").min(1)

    @staticmethod
    def patch_scale() -> NumberBuilder[int]:
        """Patch sides must survive three 2x2 poolings."""
        return (
            ValidatorBuilder.integer("scale")
            .min(SBR_PATCH_MULTIPLE)
            .multiple_of(SBR_PATCH_MULTIPLE)
        )

    @staticmethod
    def threshold() -> NumberBuilder[float]:
        return ValidatorBuilder.floating("threshold").min(0).max(1)

    # ============================================================
    # Runtime
    # ============================================================

    @staticmethod
    def seed() -> NumberBuilder[int]:
        return ValidatorBuilder.integer("seed").min(0)

    @staticmethod
    def threads() -> NumberBuilder[int]:
        return ValidatorBuilder.integer("threads").min(1)

    @staticmethod
    def precision() -> StringBuilder:
        return ValidatorBuilder.string("precision").strip().lower().one_of(["f32", "f64"])

    @staticmethod
    def samples() -> NumberBuilder[int]:
        return ValidatorBuilder.integer("samples").min(1)

    @staticmethod
    def sigma() -> NumberBuilder[float]:
        return ValidatorBuilder.floating("sigma").finite().min(0)

    @staticmethod
    def dimension(name: str) -> NumberBuilder[int]:
        return ValidatorBuilder.integer(name).min(1)

    # ============================================================
    # File Path Validation
    # ============================================================

    @staticmethod
    def existing_file(name: str = "file") -> PathBuilder:
        return ValidatorBuilder.path(name).normalize().must_exist().must_be_file()

    @staticmethod
    def existing_dir(name: str = "directory") -> PathBuilder:
        return ValidatorBuilder.path(name).normalize().must_exist().must_be_dir()
