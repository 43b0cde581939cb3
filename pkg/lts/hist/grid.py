"""The 201-bin value grid on [-1, 1]."""

import math

import numpy as np

from lts.constants import BIN_COUNT, BIN_ROUNDING_EPSILON, BIN_WIDTH, GRID_MIN, OVERFLOW_SLOT
from lts.exceptions import NonFiniteInputError

# Bin i represents the value -1 + 0.01 * i
BIN_VALUES: np.ndarray = GRID_MIN + BIN_WIDTH * np.arange(BIN_COUNT, dtype=np.float64)
BIN_VALUES.setflags(write=False)

# Returned for values that fall outside the grid
OVERFLOW = OVERFLOW_SLOT


def bin_index(value: float) -> int:
    """
    Nearest grid bin of a value, or OVERFLOW when it falls outside [0, 200].

    Ties round up, so 1.005 lands past the last bin.

    Raises:
        NonFiniteInputError: If the value is NaN or infinite
    """
    if not math.isfinite(value):
        raise NonFiniteInputError(f"Cannot bin non-finite value {value}")
    index = math.floor((value - GRID_MIN) / BIN_WIDTH + 0.5 + BIN_ROUNDING_EPSILON)
    return index if 0 <= index < BIN_COUNT else OVERFLOW


def bin_indices(values: np.ndarray) -> np.ndarray:
    """Vectorized `bin_index`; out-of-grid entries map to OVERFLOW."""
    values = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NonFiniteInputError("Cannot bin non-finite values")
    index = np.floor((values - GRID_MIN) / BIN_WIDTH + 0.5 + BIN_ROUNDING_EPSILON)
    return np.where((index >= 0) & (index < BIN_COUNT), index, OVERFLOW).astype(np.int64)
