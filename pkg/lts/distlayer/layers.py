"""Product and sum distribution layers.

Inputs are density vectors on the 201-bin grid (Σ density·Δ is the mass).
Kernels carry 202 entries: the 201 grid values plus an overflow slot. Only
kernel gradients are computed; these layers sit at the input of a network.
"""

import numpy as np

from lts.constants import (
    BIN_COUNT,
    BIN_WIDTH,
    KERNEL_INIT_CENTER_RANGE,
    KERNEL_INIT_SIGMA,
    KERNEL_SIZE,
)
from lts.distlayer.tables import TripletTable, product_table, sum_overflow_pairs, sum_table
from lts.exceptions import NonFiniteInputError, ShapeError
from lts.hist.grid import BIN_VALUES
from lts.nn.functional import Cache
from lts.nn.parameter import Module, Parameter
from lts.types.config import ZeroBinRule
from lts.types.histogram import TemporalHistogram


def _check_finite(name: str, array: np.ndarray) -> None:
    if not np.all(np.isfinite(array)):
        raise NonFiniteInputError(f"{name} contains non-finite entries")


def _check_shape(name: str, array: np.ndarray, shape: tuple[int, ...]) -> None:
    if array.shape != shape:
        raise ShapeError(f"{name} must have shape {shape}, got {array.shape}")


def mass_to_density(h: TemporalHistogram | np.ndarray) -> np.ndarray:
    """Divide bin masses by Δ; works on any array whose last axis is the grid."""
    mass = h.mass if isinstance(h, TemporalHistogram) else np.asarray(h)
    return mass / BIN_WIDTH


def gaussian_bump_kernels(
    rng: np.random.Generator, count: int, dtype: type[np.floating] = np.float32
) -> np.ndarray:
    """
    Kernels initialized as discretized unit-mass Gaussian densities.

    Centers are uniform on ±0.3 and the width is 0.1; the overflow slot is 0.
    """
    centers = rng.uniform(-KERNEL_INIT_CENTER_RANGE, KERNEL_INIT_CENTER_RANGE, size=count)
    bumps = np.exp(-((BIN_VALUES[None, :] - centers[:, None]) ** 2) / (2 * KERNEL_INIT_SIGMA**2))
    bumps /= bumps.sum(axis=1, keepdims=True) * BIN_WIDTH
    kernels = np.zeros((count, KERNEL_SIZE))
    kernels[:, :BIN_COUNT] = bumps
    return kernels.astype(dtype)


# ============================================================
# Single-vector operations
# ============================================================


def _forward_one(table: TripletTable, x: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    kernel = np.asarray(kernel, dtype=np.float64)
    _check_shape("input density", x, (BIN_COUNT,))
    _check_shape("kernel", kernel, (KERNEL_SIZE,))
    _check_finite("input density", x)
    _check_finite("kernel", kernel)
    return table.apply(x[None, :], kernel[None, :])[0, 0]


def _backward_one(table: TripletTable, x: np.ndarray, grad_z: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    grad_z = np.asarray(grad_z, dtype=np.float64)
    _check_shape("input density", x, (BIN_COUNT,))
    _check_shape("output gradient", grad_z, (BIN_COUNT,))
    return table.kernel_gradient(x[None, :], grad_z[None, None, :])[0]


def product_forward(
    x: np.ndarray, w: np.ndarray, rule: ZeroBinRule = ZeroBinRule.IMPROVED
) -> np.ndarray:
    """
    Density of Z = X·W on the grid from densities of X and W.

    Raises:
        NonFiniteInputError: If either input has a NaN or infinite entry
        ShapeError: If x is not (201,) or w is not (202,)
    """
    return _forward_one(product_table(rule), x, w)


def product_backward_kernel(
    x: np.ndarray, grad_z: np.ndarray, rule: ZeroBinRule = ZeroBinRule.IMPROVED
) -> np.ndarray:
    """Gradient of ⟨product_forward(x, w), grad_z⟩ with respect to w (202 entries)."""
    return _backward_one(product_table(rule), x, grad_z)


def sum_forward(x: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Density of Z = X + B on the grid; shifts past ±1 are dropped.

    Raises:
        NonFiniteInputError: If either input has a NaN or infinite entry
        ShapeError: If x is not (201,) or b is not (202,)
    """
    return _forward_one(sum_table(), x, b)


def sum_backward_kernel(x: np.ndarray, grad_z: np.ndarray) -> np.ndarray:
    """Gradient of ⟨sum_forward(x, b), grad_z⟩ with respect to b (202 entries)."""
    return _backward_one(sum_table(), x, grad_z)


def sum_overflow_mass(x: np.ndarray, b: np.ndarray) -> float:
    """
    Mass of X + B that lands outside [-1, 1] and is dropped by `sum_forward`.

    Together with the on-grid output it accounts for the product of the
    on-grid input and kernel masses.
    """
    x = np.asarray(x, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_shape("input density", x, (BIN_COUNT,))
    _check_shape("kernel", b, (KERNEL_SIZE,))
    outer = np.outer(x, b[:BIN_COUNT])
    return float(outer[sum_overflow_pairs()].sum() * BIN_WIDTH * BIN_WIDTH)


# ============================================================
# Batched layers
# ============================================================


class DistributionLayer(Module):
    """A bank of K kernels applied to a batch of densities: (N, 201) -> (N, K, 201)."""

    def __init__(self, name: str, kernels: np.ndarray, table: TripletTable):
        if kernels.ndim != 2 or kernels.shape[1] != KERNEL_SIZE:
            raise ShapeError(f"Kernels must be (K, {KERNEL_SIZE}), got {kernels.shape}")
        self.kernels = Parameter(f"{name}.kernels", kernels)
        self.table = table

    def parameters(self) -> list[Parameter]:
        return [self.kernels]

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Cache]:
        if x.ndim != 2 or x.shape[1] != BIN_COUNT:
            raise ShapeError(f"Expected (N, {BIN_COUNT}) densities, got {x.shape}")
        _check_finite("input density", x)
        out = self.table.apply(x, self.kernels.value).astype(self.kernels.value.dtype, copy=False)
        return out, x

    def backward(self, grad: np.ndarray, cache: Cache) -> None:
        """Accumulate the kernel gradient; input gradients are not produced."""
        self.kernels.grad += self.table.kernel_gradient(cache, grad).astype(
            self.kernels.grad.dtype, copy=False
        )


class ProductDistributionLayer(DistributionLayer):
    def __init__(
        self,
        name: str,
        kernels: np.ndarray,
        rule: ZeroBinRule = ZeroBinRule.IMPROVED,
    ):
        super().__init__(name, kernels, product_table(rule))
        self.rule = rule


class SumDistributionLayer(DistributionLayer):
    def __init__(self, name: str, kernels: np.ndarray):
        super().__init__(name, kernels, sum_table())
