"""The distribution-learning classifier.

Pipeline for a batch of (N, 3, 201) histogram masses:

    density = mass / Δ, per color channel
    K_p product + K_s sum distribution layers, kernels shared across channels
    outputs rescaled to masses and stacked -> (N, 3·(K_p + K_s), 201)
    1x1 mixing convolution over the bin axis -> (N, mix, 201)
    full-width convolution (rank-1 per unit) + ReLU -> (N, hidden)
    dense + log-softmax -> (N, 3)
"""

import numpy as np

from lts.constants import BIN_COUNT, BIN_WIDTH, DIDL_CLASSES, HISTOGRAM_CHANNELS
from lts.distlayer.layers import (
    ProductDistributionLayer,
    SumDistributionLayer,
    gaussian_bump_kernels,
    mass_to_density,
)
from lts.exceptions import ShapeError
from lts.nn import functional as F
from lts.nn.functional import Cache
from lts.nn.layers import Conv2d, Dense
from lts.nn.losses import log_softmax, log_softmax_backward
from lts.nn.parameter import Module, Parameter, uniform_fan_in
from lts.types.config import DidlSettings


class FullWidthConv(Module):
    """
    A convolution whose kernel spans all bins, so each unit sees the whole
    (C, 201) map and emits one value.

    Each unit's (C, 201) kernel is the outer product of a channel vector and a
    bin profile.
    """

    def __init__(
        self,
        name: str,
        channels: int,
        units: int,
        rng: np.random.Generator,
        dtype: type[np.floating] = np.float32,
    ):
        self.profile = Parameter(
            f"{name}.profile", uniform_fan_in(rng, (units, BIN_COUNT), BIN_COUNT, dtype)
        )
        self.mixing = Parameter(
            f"{name}.mixing", uniform_fan_in(rng, (units, channels), channels, dtype)
        )
        self.bias = Parameter(
            f"{name}.bias", uniform_fan_in(rng, (units,), channels * BIN_COUNT, dtype)
        )

    def parameters(self) -> list[Parameter]:
        return [self.profile, self.mixing, self.bias]

    def forward(self, h: np.ndarray) -> tuple[np.ndarray, Cache]:
        """(N, C, 201) -> (N, units)."""
        projected = np.einsum("ncb,ub->ncu", h, self.profile.value, optimize=True)
        out = np.einsum("ncu,uc->nu", projected, self.mixing.value) + self.bias.value
        return out, (h, projected)

    def backward(self, grad: np.ndarray, cache: Cache) -> np.ndarray:
        h, projected = cache
        a = self.mixing.value
        self.mixing.grad += np.einsum("nu,ncu->uc", grad, projected)
        weighted = grad[:, None, :] * a.T[None, :, :]
        self.profile.grad += np.einsum("ncu,ncb->ub", weighted, h, optimize=True)
        self.bias.grad += grad.sum(axis=0)
        return np.einsum("ncu,ub->ncb", weighted, self.profile.value, optimize=True)


class DidlModel(Module):
    def __init__(
        self,
        settings: DidlSettings,
        rng: np.random.Generator,
        dtype: type[np.floating] = np.float32,
    ):
        self.settings = settings
        self.product = ProductDistributionLayer(
            "product",
            gaussian_bump_kernels(rng, settings.product_kernels, dtype),
            settings.zero_bin_rule,
        )
        self.sum = SumDistributionLayer(
            "sum", gaussian_bump_kernels(rng, settings.sum_kernels, dtype)
        )
        features = HISTOGRAM_CHANNELS * (settings.product_kernels + settings.sum_kernels)
        self.mix = Conv2d("mix", features, settings.mix_channels, 1, rng, dtype=dtype)
        self.full = FullWidthConv("full", settings.mix_channels, settings.hidden_units, rng, dtype)
        self.head = Dense("head", settings.hidden_units, DIDL_CLASSES, rng, dtype)

    @property
    def dtype(self) -> np.dtype:
        return self.head.weight.value.dtype

    def parameters(self) -> list[Parameter]:
        return (
            self.product.parameters()
            + self.sum.parameters()
            + self.mix.parameters()
            + self.full.parameters()
            + self.head.parameters()
        )

    def forward(self, mass: np.ndarray) -> tuple[np.ndarray, Cache]:
        """
        Class log-probabilities for a batch of (N, 3, 201) histogram masses.

        Raises:
            ShapeError: On an empty batch or wrong trailing dimensions
        """
        if mass.ndim != 3 or mass.shape[1:] != (HISTOGRAM_CHANNELS, BIN_COUNT) or not len(mass):
            raise ShapeError(
                f"Expected a nonempty (N, {HISTOGRAM_CHANNELS}, {BIN_COUNT}) batch, "
                f"got {mass.shape}"
            )
        n = mass.shape[0]
        density = mass_to_density(mass.astype(self.dtype, copy=False)).reshape(-1, BIN_COUNT)

        prod_out, prod_cache = self.product.forward(density)
        sum_out, sum_cache = self.sum.forward(density)
        features = np.concatenate([prod_out, sum_out], axis=1) * BIN_WIDTH
        features = features.reshape(n, -1, BIN_COUNT)

        mixed, mix_cache = self.mix.forward(features[..., None])
        hidden, full_cache = self.full.forward(mixed[..., 0])
        hidden, relu_cache = F.relu_forward(hidden)
        logits, head_cache = self.head.forward(hidden)
        log_probs = log_softmax(logits, axis=1)

        cache = (prod_cache, sum_cache, mix_cache, full_cache, relu_cache, head_cache, log_probs)
        return log_probs, cache

    def backward(self, grad: np.ndarray, cache: Cache) -> None:
        """Accumulate parameter gradients from d loss / d log-probabilities."""
        prod_cache, sum_cache, mix_cache, full_cache, relu_cache, head_cache, log_probs = cache
        n = grad.shape[0]

        grad = log_softmax_backward(grad, log_probs, axis=1)
        grad = self.head.backward(grad, head_cache)
        grad = F.relu_backward(grad, relu_cache)
        grad = self.full.backward(grad, full_cache)
        grad = self.mix.backward(grad[..., None], mix_cache)[..., 0]

        kernels = self.settings.product_kernels + self.settings.sum_kernels
        grad = grad.reshape(n * HISTOGRAM_CHANNELS, kernels, BIN_COUNT) * BIN_WIDTH
        self.product.backward(grad[:, : self.settings.product_kernels], prod_cache)
        self.sum.backward(grad[:, self.settings.product_kernels :], sum_cache)

    def log_probabilities(self, mass: np.ndarray) -> np.ndarray:
        return self.forward(mass)[0]


def build_model(
    seed: int,
    settings: DidlSettings | None = None,
    dtype: type[np.floating] = np.float32,
) -> DidlModel:
    """A freshly initialized model; identical for identical seeds and settings."""
    return DidlModel(settings or DidlSettings(), np.random.default_rng(seed), dtype)
