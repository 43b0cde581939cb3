"""Application-wide constants for LTS.

This module contains the histogram grid layout, the default hyperparameters
and file-format identifiers used throughout the application. Hyperparameter
values here are defaults only; they can be overridden through configuration
files or command-line flags.
"""

from enum import Enum

# ============================================================
# Histogram grid
# ============================================================

# Differences are discretized on [-1, 1] with a step of 0.01
BIN_COUNT = 201
BIN_WIDTH = 0.01
GRID_MIN = -1.0
GRID_MAX = 1.0

# Bin holding the value 0
ZERO_BIN = 100

# Learnable kernels carry one extra slot for values outside [-1, 1]
KERNEL_SIZE = BIN_COUNT + 1
OVERFLOW_SLOT = BIN_COUNT

# Absorbs representation error when a value sits on a bin boundary
# (1.005 must land in bin 201, not 200)
BIN_ROUNDING_EPSILON = 1e-9

# Each instance carries one histogram per color channel
HISTOGRAM_CHANNELS = 3


# ============================================================
# Labels and mask encodings
# ============================================================


class Label(int, Enum):
    """Pixel labels shared by ground truth, the classifier and the metrics."""

    BACKGROUND = 0
    FOREGROUND = 1
    OTHER = 2


# Raw 8-bit ground-truth values: static, hard shadow, outside ROI, unknown, motion
DEFAULT_GT_VALUE_MAP: dict[int, Label] = {
    0: Label.BACKGROUND,
    50: Label.BACKGROUND,
    85: Label.OTHER,
    170: Label.OTHER,
    255: Label.FOREGROUND,
}

# Encoding used when writing predicted masks, and its inverse for reading them back
MASK_WRITE_VALUES: dict[Label, int] = {
    Label.BACKGROUND: 0,
    Label.OTHER: 128,
    Label.FOREGROUND: 255,
}
PREDICTED_VALUE_MAP: dict[int, Label] = {value: label for label, value in MASK_WRITE_VALUES.items()}

# Encoding used when writing ground truth (synthetic scenes), readable with the default map
GT_WRITE_VALUES: dict[Label, int] = {
    Label.BACKGROUND: 0,
    Label.OTHER: 170,
    Label.FOREGROUND: 255,
}


# ============================================================
# File naming
# ============================================================

DEFAULT_FRAME_PATTERN = "in%06d.png"
DEFAULT_GT_PATTERN = "gt%06d.png"
DEFAULT_PRED_PATTERN = "bin%06d.png"

RUN_LOG_NAME = "run.log"


# ============================================================
# Binary formats
# ============================================================

HISTOGRAM_CACHE_MAGIC = b"LTSH"
HISTOGRAM_CACHE_VERSION = 1

CHECKPOINT_MAGIC = b"LTSM"
CHECKPOINT_VERSION = 1


# ============================================================
# Histogram pruning
# ============================================================

DEFAULT_TAU = 0.7
DEFAULT_EXTRACT_STRIDE = 10


# ============================================================
# DIDL network and training
# ============================================================

DIDL_PRODUCT_KERNELS = 8
DIDL_SUM_KERNELS = 8
DIDL_MIX_CHANNELS = 10
DIDL_HIDDEN_UNITS = 512
DIDL_CLASSES = 3

# Kernel initialization: Gaussian bumps in value units
KERNEL_INIT_SIGMA = 0.1
KERNEL_INIT_CENTER_RANGE = 0.3

DIDL_LEARNING_RATE = 0.0001
DIDL_BATCH_SIZE = 3000
DIDL_FIRST_EPOCHS = 120
DIDL_LATER_EPOCHS = 30
DIDL_ITERATIONS = 4
DIDL_INITIAL_FRACTION = 0.05

# Background instances allowed per foreground instance in the initial subset
DIDL_MAX_BACKGROUND_RATIO = 5.0


# ============================================================
# SBR network and training
# ============================================================

SBR_LEARNING_RATE = 0.00001
SBR_BACKGROUND_WEIGHT = 0.2
SBR_FOREGROUND_WEIGHT = 0.8
SBR_SCALES = (16, 32, 64)
SBR_BATCH_SIZES = {64: 512, 32: 2048, 16: 8192}
SBR_PATCHES_PER_IMAGE = {64: 64, 32: 256, 16: 1024}
SBR_COVERAGE_LAYERS = 32
SBR_INPUT_CHANNELS = 4
SBR_OUTPUT_CHANNELS = 2
SBR_WIDTHS = (16, 32, 64, 128)

# Patch sides must survive three 2x2 poolings
SBR_PATCH_MULTIPLE = 8

# Surrogate corruption when no classifier masks are available for training
SBR_SALT_PEPPER_RATE = 0.1
SBR_NIBBLE_PROBABILITY = 0.5

# Patches pushed through the network at once; gradients accumulate across chunks
SBR_MICRO_BATCH = 64

FOREGROUND_THRESHOLD = 0.5


# ============================================================
# Optimizers
# ============================================================

ADAM_BETAS = (0.9, 0.999)
ADAM_EPSILON = 1e-8
RMSPROP_DECAY = 0.99
RMSPROP_EPSILON = 1e-8


# ============================================================
# Verification
# ============================================================

VERIFY_SAMPLES = 10_000_000
VERIFY_BIMODAL_MEAN = 4.0
GRADCHECK_STEP = 1e-4


# ============================================================
# Logging
# ============================================================

DEFAULT_LOG_LEVEL = "INFO"
