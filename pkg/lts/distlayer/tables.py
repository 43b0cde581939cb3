"""Sparse index tables behind the product and sum distribution layers.

Both layers are bilinear in (input, kernel). A table lists every nonzero
coupling as a triplet: output bin `j` receives ``coeff * x[l] * kernel[i]``.
Forward and kernel-backward passes are then a scatter over the same table.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from lts.constants import BIN_COUNT, BIN_WIDTH, KERNEL_SIZE, ZERO_BIN
from lts.hist.grid import BIN_VALUES, OVERFLOW, bin_indices
from lts.types.config import ZeroBinRule

_PLANE = BIN_COUNT * BIN_COUNT


@dataclass(frozen=True)
class TripletTable:
    """Couplings (input bin l, output bin j, kernel entry i, coefficient)."""

    l: np.ndarray
    j: np.ndarray
    i: np.ndarray
    coeff: np.ndarray

    def __post_init__(self) -> None:
        for array in (self.l, self.j, self.i, self.coeff):
            array.setflags(write=False)

    @property
    def size(self) -> int:
        return int(self.coeff.size)

    def operators(self, kernels: np.ndarray) -> np.ndarray:
        """
        Dense per-kernel operators A with ``out[n, k] = x[n] @ A[k]``.

        Args:
            kernels: (K, 202) kernel entries

        Returns:
            (K, 201, 201) array indexed [kernel, input bin, output bin]
        """
        flat = self.l * BIN_COUNT + self.j
        weights = kernels[:, self.i] * self.coeff
        ops = np.empty((kernels.shape[0], _PLANE), dtype=kernels.dtype)
        for k in range(kernels.shape[0]):
            ops[k] = np.bincount(flat, weights=weights[k], minlength=_PLANE)
        return ops.reshape(-1, BIN_COUNT, BIN_COUNT)

    def apply(self, x: np.ndarray, kernels: np.ndarray) -> np.ndarray:
        """(N, 201) inputs against (K, 202) kernels -> (N, K, 201) outputs."""
        out = np.matmul(x, self.operators(kernels))
        return np.ascontiguousarray(out.transpose(1, 0, 2))

    def kernel_gradient(self, x: np.ndarray, grad: np.ndarray) -> np.ndarray:
        """
        Gradient of the summed outputs with respect to the kernels.

        Args:
            x: (N, 201) inputs
            grad: (N, K, 201) output gradients

        Returns:
            (K, 202) kernel gradients; the overflow slot is never read by the
            forward pass, so its entry is always 0
        """
        outer = np.matmul(x.T, grad.transpose(1, 0, 2))
        values = outer[:, self.l, self.j] * self.coeff
        result = np.empty((grad.shape[1], KERNEL_SIZE), dtype=np.result_type(x, grad))
        for k in range(grad.shape[1]):
            result[k] = np.bincount(self.i, weights=values[k], minlength=KERNEL_SIZE)
        return result


@lru_cache(maxsize=None)
def product_table(rule: ZeroBinRule = ZeroBinRule.IMPROVED) -> TripletTable:
    """
    Couplings of the discretized product distribution.

    For a nonzero kernel value w_i, output bin j reads the input bin nearest
    to z_j / w_i, weighted by Δ/|w_i|. Lookups past the grid read 0. Under
    the improved rule the zero output bin also gets the kernel-zero term
    w(0)·Σ x(k)Δ/|x_k| and the capped self term w(0)·x(0)/Δ.
    """
    nonzero = np.flatnonzero(np.arange(BIN_COUNT) != ZERO_BIN)
    ii, jj = np.meshgrid(nonzero, np.arange(BIN_COUNT), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    ll = bin_indices(BIN_VALUES[jj] / BIN_VALUES[ii])
    keep = ll != OVERFLOW
    parts_l = [ll[keep]]
    parts_j = [jj[keep]]
    parts_i = [ii[keep]]
    parts_c = [BIN_WIDTH / np.abs(BIN_VALUES[ii[keep]])]

    if rule is ZeroBinRule.IMPROVED:
        parts_l.append(nonzero)
        parts_j.append(np.full(nonzero.size, ZERO_BIN))
        parts_i.append(np.full(nonzero.size, ZERO_BIN))
        parts_c.append(BIN_WIDTH / np.abs(BIN_VALUES[nonzero]))

        parts_l.append(np.array([ZERO_BIN]))
        parts_j.append(np.array([ZERO_BIN]))
        parts_i.append(np.array([ZERO_BIN]))
        parts_c.append(np.array([1.0 / BIN_WIDTH]))

    return TripletTable(
        l=np.concatenate(parts_l).astype(np.int64),
        j=np.concatenate(parts_j).astype(np.int64),
        i=np.concatenate(parts_i).astype(np.int64),
        coeff=np.concatenate(parts_c).astype(np.float64),
    )


@lru_cache(maxsize=None)
def sum_table() -> TripletTable:
    """Couplings of the discrete convolution: bin j reads x(j - k + 100)·b(k)·Δ."""
    jj, kk = np.meshgrid(np.arange(BIN_COUNT), np.arange(BIN_COUNT), indexing="ij")
    ll = jj - kk + ZERO_BIN
    keep = (ll >= 0) & (ll < BIN_COUNT)
    return TripletTable(
        l=ll[keep].astype(np.int64),
        j=jj[keep].astype(np.int64),
        i=kk[keep].astype(np.int64),
        coeff=np.full(int(keep.sum()), BIN_WIDTH),
    )


@lru_cache(maxsize=1)
def sum_overflow_pairs() -> np.ndarray:
    """Mask over (input bin, kernel bin) pairs whose sum leaves the grid."""
    ll, kk = np.meshgrid(np.arange(BIN_COUNT), np.arange(BIN_COUNT), indexing="ij")
    target = ll + kk - ZERO_BIN
    mask = (target < 0) | (target >= BIN_COUNT)
    mask.setflags(write=False)
    return mask
