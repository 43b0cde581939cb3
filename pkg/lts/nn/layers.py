"""Parameterized layers built on the functional kernels."""

import numpy as np

from lts.nn import functional as F
from lts.nn.functional import Cache
from lts.nn.parameter import Module, Parameter, uniform_fan_in


class Conv2d(Module):
    def __init__(
        self,
        name: str,
        in_channels: int,
        out_channels: int,
        kernel_size: int,
        rng: np.random.Generator,
        padding: int = 0,
        dtype: type[np.floating] = np.float32,
    ):
        fan_in = in_channels * kernel_size * kernel_size
        shape = (out_channels, in_channels, kernel_size, kernel_size)
        self.weight = Parameter(f"{name}.weight", uniform_fan_in(rng, shape, fan_in, dtype))
        self.bias = Parameter(f"{name}.bias", uniform_fan_in(rng, (out_channels,), fan_in, dtype))
        self.padding = padding

    def parameters(self) -> list[Parameter]:
        return [self.weight, self.bias]

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Cache]:
        return F.conv2d_forward(x, self.weight.value, self.bias.value, padding=self.padding)

    def backward(self, grad: np.ndarray, cache: Cache) -> np.ndarray:
        dx, dw, db = F.conv2d_backward(grad, cache)
        self.weight.grad += dw
        self.bias.grad += db
        return dx


class TransposeConv2x2(Module):
    """Stride-2 upsampling with a 2x2 kernel."""

    def __init__(
        self,
        name: str,
        in_channels: int,
        out_channels: int,
        rng: np.random.Generator,
        dtype: type[np.floating] = np.float32,
    ):
        fan_in = in_channels * 4
        shape = (in_channels, out_channels, 2, 2)
        self.weight = Parameter(f"{name}.weight", uniform_fan_in(rng, shape, fan_in, dtype))
        self.bias = Parameter(f"{name}.bias", uniform_fan_in(rng, (out_channels,), fan_in, dtype))

    def parameters(self) -> list[Parameter]:
        return [self.weight, self.bias]

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Cache]:
        return F.transpose_conv2x2_forward(x, self.weight.value, self.bias.value)

    def backward(self, grad: np.ndarray, cache: Cache) -> np.ndarray:
        dx, dw, db = F.transpose_conv2x2_backward(grad, cache)
        self.weight.grad += dw
        self.bias.grad += db
        return dx


class Dense(Module):
    def __init__(
        self,
        name: str,
        in_features: int,
        out_features: int,
        rng: np.random.Generator,
        dtype: type[np.floating] = np.float32,
    ):
        shape = (out_features, in_features)
        self.weight = Parameter(f"{name}.weight", uniform_fan_in(rng, shape, in_features, dtype))
        self.bias = Parameter(
            f"{name}.bias", uniform_fan_in(rng, (out_features,), in_features, dtype)
        )

    def parameters(self) -> list[Parameter]:
        return [self.weight, self.bias]

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Cache]:
        return F.dense_forward(x, self.weight.value, self.bias.value)

    def backward(self, grad: np.ndarray, cache: Cache) -> np.ndarray:
        dx, dw, db = F.dense_backward(grad, cache)
        self.weight.grad += dw
        self.bias.grad += db
        return dx


class DoubleConv(Module):
    """Two 3x3 same-padded convolutions, each followed by ReLU."""

    def __init__(
        self,
        name: str,
        in_channels: int,
        out_channels: int,
        rng: np.random.Generator,
        dtype: type[np.floating] = np.float32,
    ):
        self.first = Conv2d(f"{name}.0", in_channels, out_channels, 3, rng, 1, dtype)
        self.second = Conv2d(f"{name}.1", out_channels, out_channels, 3, rng, 1, dtype)

    def parameters(self) -> list[Parameter]:
        return self.first.parameters() + self.second.parameters()

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Cache]:
        h, c1 = self.first.forward(x)
        h, r1 = F.relu_forward(h)
        h, c2 = self.second.forward(h)
        h, r2 = F.relu_forward(h)
        return h, (c1, r1, c2, r2)

    def backward(self, grad: np.ndarray, cache: Cache) -> np.ndarray:
        c1, r1, c2, r2 = cache
        grad = self.second.backward(F.relu_backward(grad, r2), c2)
        return self.first.backward(F.relu_backward(grad, r1), c1)
