from enum import Enum
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, field_validator

from lts import constants as C
from lts.validation import ValidationRules, for_pydantic


class ZeroBinRule(str, Enum):
    """How the product layer evaluates the output bin at value 0."""

    IMPROVED = "improved"
    SKIP = "skip"


class HistogramSettings(BaseModel):
    bins: int = C.BIN_COUNT
    delta: float = C.BIN_WIDTH
    tau: float = C.DEFAULT_TAU
    stride: int = C.DEFAULT_EXTRACT_STRIDE
    frame_pattern: str = C.DEFAULT_FRAME_PATTERN
    gt_pattern: str = C.DEFAULT_GT_PATTERN

    validate_bins = field_validator("bins")(for_pydantic(ValidationRules.bins()))
    validate_delta = field_validator("delta")(for_pydantic(ValidationRules.delta()))
    validate_tau = field_validator("tau")(for_pydantic(ValidationRules.tau()))
    validate_stride = field_validator("stride")(for_pydantic(ValidationRules.stride()))

    class Config:
        frozen = True


class DidlSettings(BaseModel):
    lr: float = C.DIDL_LEARNING_RATE
    batch: int = C.DIDL_BATCH_SIZE
    first_epochs: int = C.DIDL_FIRST_EPOCHS
    later_epochs: int = C.DIDL_LATER_EPOCHS
    iterations: int = C.DIDL_ITERATIONS
    initial_fraction: float = C.DIDL_INITIAL_FRACTION
    max_background_ratio: float = C.DIDL_MAX_BACKGROUND_RATIO
    product_kernels: int = C.DIDL_PRODUCT_KERNELS
    sum_kernels: int = C.DIDL_SUM_KERNELS
    mix_channels: int = C.DIDL_MIX_CHANNELS
    hidden_units: int = C.DIDL_HIDDEN_UNITS
    zero_bin_rule: ZeroBinRule = ZeroBinRule.IMPROVED

    validate_lr = field_validator("lr")(for_pydantic(ValidationRules.learning_rate("didl.lr")))
    validate_batch = field_validator("batch")(
        for_pydantic(ValidationRules.batch_size("didl.batch"))
    )
    validate_first_epochs = field_validator("first_epochs")(
        for_pydantic(ValidationRules.epochs("didl.first_epochs"))
    )
    validate_later_epochs = field_validator("later_epochs")(
        for_pydantic(ValidationRules.epochs("didl.later_epochs"))
    )
    validate_iterations = field_validator("iterations")(
        for_pydantic(ValidationRules.iterations())
    )
    validate_initial_fraction = field_validator("initial_fraction")(
        for_pydantic(ValidationRules.initial_fraction())
    )
    validate_max_background_ratio = field_validator("max_background_ratio")(
        for_pydantic(ValidationRules.ratio("didl.max_background_ratio"))
    )
    validate_product_kernels = field_validator("product_kernels")(
        for_pydantic(ValidationRules.count("didl.product_kernels"))
    )
    validate_sum_kernels = field_validator("sum_kernels")(
        for_pydantic(ValidationRules.count("didl.sum_kernels"))
    )
    validate_mix_channels = field_validator("mix_channels")(
        for_pydantic(ValidationRules.count("didl.mix_channels"))
    )
    validate_hidden_units = field_validator("hidden_units")(
        for_pydantic(ValidationRules.count("didl.hidden_units"))
    )

    @field_validator("zero_bin_rule", mode="before")
    @classmethod
    def validate_zero_bin_rule(cls, v: Any) -> Any:
        if isinstance(v, ZeroBinRule):
            return v
        try:
            return ZeroBinRule(ValidationRules.zero_bin_rule().build()(str(v)))
        except Exception as e:
            raise ValueError(str(e)) from e

    class Config:
        frozen = True


class SbrSettings(BaseModel):
    lr: float = C.SBR_LEARNING_RATE
    bg_weight: float = C.SBR_BACKGROUND_WEIGHT
    fg_weight: float = C.SBR_FOREGROUND_WEIGHT
    batch_64: int = C.SBR_BATCH_SIZES[64]
    batch_32: int = C.SBR_BATCH_SIZES[32]
    batch_16: int = C.SBR_BATCH_SIZES[16]
    patches_64: int = C.SBR_PATCHES_PER_IMAGE[64]
    patches_32: int = C.SBR_PATCHES_PER_IMAGE[32]
    patches_16: int = C.SBR_PATCHES_PER_IMAGE[16]
    scales: tuple[int, ...] = C.SBR_SCALES
    l: int = C.SBR_COVERAGE_LAYERS
    epochs: int = 10
    micro_batch: int = C.SBR_MICRO_BATCH
    salt_pepper_rate: float = C.SBR_SALT_PEPPER_RATE
    nibble_probability: float = C.SBR_NIBBLE_PROBABILITY
    randomize: bool = True
    frame_stride: int = 1

    validate_lr = field_validator("lr")(for_pydantic(ValidationRules.learning_rate("sbr.lr")))
    validate_bg_weight = field_validator("bg_weight")(
        for_pydantic(ValidationRules.class_weight("sbr.bg_weight"))
    )
    validate_fg_weight = field_validator("fg_weight")(
        for_pydantic(ValidationRules.class_weight("sbr.fg_weight"))
    )
    validate_batches = field_validator("batch_64", "batch_32", "batch_16")(
        for_pydantic(ValidationRules.batch_size("sbr.batch"))
    )
    validate_patches = field_validator("patches_64", "patches_32", "patches_16")(
        for_pydantic(ValidationRules.count("sbr.patches"))
    )
    validate_l = field_validator("l")(for_pydantic(ValidationRules.coverage_layers()))
    validate_epochs = field_validator("epochs")(
        for_pydantic(ValidationRules.epochs("sbr.epochs"))
    )
    validate_micro_batch = field_validator("micro_batch")(
        for_pydantic(ValidationRules.count("sbr.micro_batch"))
    )
    validate_salt_pepper_rate = field_validator("salt_pepper_rate")(
        for_pydantic(ValidationRules.probability("sbr.salt_pepper_rate"))
    )
    validate_nibble_probability = field_validator("nibble_probability")(
        for_pydantic(ValidationRules.probability("sbr.nibble_probability"))
    )
    validate_frame_stride = field_validator("frame_stride")(
        for_pydantic(ValidationRules.count("sbr.frame_stride"))
    )

    @field_validator("scales", mode="before")
    @classmethod
    def validate_scales(cls, v: Any) -> tuple[int, ...]:
        """Accept "16,32,64" from config files as well as sequences."""
        items = [p for p in v.split(",") if p.strip()] if isinstance(v, str) else list(v)
        if not items:
            raise ValueError("scales cannot be empty")
        check = ValidationRules.patch_scale().build()
        try:
            return tuple(sorted({check(str(item)) for item in items}))
        except Exception as e:
            raise ValueError(str(e)) from e

    def batch_size(self, scale: int) -> int:
        """Logical batch size for a patch scale; other scales keep the 64-pixel area ratio."""
        explicit = {64: self.batch_64, 32: self.batch_32, 16: self.batch_16}
        if scale in explicit:
            return explicit[scale]
        return max(1, round(self.batch_64 * (64 / scale) ** 2))

    def patches_per_image(self, scale: int) -> int:
        explicit = {64: self.patches_64, 32: self.patches_32, 16: self.patches_16}
        if scale in explicit:
            return explicit[scale]
        return max(1, round(self.patches_64 * (64 / scale) ** 2))

    class Config:
        frozen = True


class RunConfig(BaseModel):
    """Every tunable of a run, with the published defaults."""

    seed: int = 0
    threads: int = 1
    precision: Literal["f32", "f64"] = "f32"
    threshold: float = C.FOREGROUND_THRESHOLD
    histogram: HistogramSettings = HistogramSettings()
    didl: DidlSettings = DidlSettings()
    sbr: SbrSettings = SbrSettings()

    validate_seed = field_validator("seed")(for_pydantic(ValidationRules.seed()))
    validate_threads = field_validator("threads")(for_pydantic(ValidationRules.threads()))
    validate_threshold = field_validator("threshold")(for_pydantic(ValidationRules.threshold()))

    @field_validator("precision", mode="before")
    @classmethod
    def validate_precision(cls, v: Any) -> str:
        try:
            return ValidationRules.precision().build()(str(v))
        except Exception as e:
            raise ValueError(str(e)) from e

    @property
    def dtype(self) -> type[np.floating]:
        return np.float64 if self.precision == "f64" else np.float32

    def flatten(self) -> dict[str, Any]:
        """Dotted-key view of every value, as written in config files and run headers."""
        flat: dict[str, Any] = {}
        for key, value in self.model_dump(mode="json").items():
            if isinstance(value, dict):
                for sub_key, sub_value in value.items():
                    if isinstance(sub_value, list):
                        sub_value = ",".join(str(item) for item in sub_value)
                    flat[f"{key}.{sub_key}"] = sub_value
            else:
                flat[key] = value
        return flat

    class Config:
        frozen = True
