"""The refine block: a small encoder-decoder over (RGB + foreground) patches."""

import numpy as np

from lts.constants import SBR_INPUT_CHANNELS, SBR_OUTPUT_CHANNELS, SBR_PATCH_MULTIPLE, SBR_WIDTHS
from lts.exceptions import ShapeError
from lts.nn import functional as F
from lts.nn.functional import Cache
from lts.nn.layers import Conv2d, DoubleConv, TransposeConv2x2
from lts.nn.losses import log_softmax
from lts.nn.parameter import Module, Parameter


class RefineNet(Module):
    """
    Three pooling stages down, a 1x1 bottleneck, three transpose-conv stages
    up with skip concatenation, and a 1x1 projection to two logits.

    Input is (N, 4, s, s) with s a multiple of 8; output is (N, 2, s, s).
    """

    def __init__(
        self,
        rng: np.random.Generator,
        widths: tuple[int, int, int, int] = SBR_WIDTHS,
        dtype: type[np.floating] = np.float32,
    ):
        w1, w2, w3, w4 = widths
        self.enc1 = DoubleConv("enc1", SBR_INPUT_CHANNELS, w1, rng, dtype)
        self.enc2 = DoubleConv("enc2", w1, w2, rng, dtype)
        self.enc3 = DoubleConv("enc3", w2, w3, rng, dtype)
        self.bottleneck = Conv2d("bottleneck", w3, w4, 1, rng, dtype=dtype)
        self.up3 = TransposeConv2x2("up3", w4, w3, rng, dtype)
        self.dec3 = DoubleConv("dec3", 2 * w3, w3, rng, dtype)
        self.up2 = TransposeConv2x2("up2", w3, w2, rng, dtype)
        self.dec2 = DoubleConv("dec2", 2 * w2, w2, rng, dtype)
        self.up1 = TransposeConv2x2("up1", w2, w1, rng, dtype)
        self.dec1 = DoubleConv("dec1", 2 * w1, w1, rng, dtype)
        self.head = Conv2d("head", w1, SBR_OUTPUT_CHANNELS, 1, rng, dtype=dtype)

    @property
    def dtype(self) -> np.dtype:
        return self.head.weight.value.dtype

    def _layers(self) -> list[Module]:
        return [
            self.enc1,
            self.enc2,
            self.enc3,
            self.bottleneck,
            self.up3,
            self.dec3,
            self.up2,
            self.dec2,
            self.up1,
            self.dec1,
            self.head,
        ]

    def parameters(self) -> list[Parameter]:
        return [p for layer in self._layers() for p in layer.parameters()]

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Cache]:
        if x.ndim != 4 or x.shape[1] != SBR_INPUT_CHANNELS:
            raise ShapeError(f"Expected (N, {SBR_INPUT_CHANNELS}, s, s) patches, got {x.shape}")
        size = x.shape[2]
        if x.shape[3] != size or size < SBR_PATCH_MULTIPLE or size % SBR_PATCH_MULTIPLE:
            raise ShapeError(
                f"Patches must be square with a side that is a multiple of {SBR_PATCH_MULTIPLE}, "
                f"got {x.shape[2]}x{x.shape[3]}"
            )
        x = x.astype(self.dtype, copy=False)

        s1, c_e1 = self.enc1.forward(x)
        h, c_p1 = F.maxpool2x2_forward(s1)
        s2, c_e2 = self.enc2.forward(h)
        h, c_p2 = F.maxpool2x2_forward(s2)
        s3, c_e3 = self.enc3.forward(h)
        h, c_p3 = F.maxpool2x2_forward(s3)

        h, c_b = self.bottleneck.forward(h)
        h, c_br = F.relu_forward(h)

        h, c_u3 = self.up3.forward(h)
        h, c_cat3 = F.concat_channels([h, s3])
        h, c_d3 = self.dec3.forward(h)
        h, c_u2 = self.up2.forward(h)
        h, c_cat2 = F.concat_channels([h, s2])
        h, c_d2 = self.dec2.forward(h)
        h, c_u1 = self.up1.forward(h)
        h, c_cat1 = F.concat_channels([h, s1])
        h, c_d1 = self.dec1.forward(h)
        logits, c_head = self.head.forward(h)

        cache = (
            c_e1, c_p1, c_e2, c_p2, c_e3, c_p3, c_b, c_br,
            c_u3, c_cat3, c_d3, c_u2, c_cat2, c_d2, c_u1, c_cat1, c_d1, c_head,
        )  # fmt: skip
        return logits, cache

    def backward(self, grad: np.ndarray, cache: Cache) -> np.ndarray:
        """Accumulate parameter gradients from d loss / d logits; returns the input gradient."""
        (
            c_e1, c_p1, c_e2, c_p2, c_e3, c_p3, c_b, c_br,
            c_u3, c_cat3, c_d3, c_u2, c_cat2, c_d2, c_u1, c_cat1, c_d1, c_head,
        ) = cache  # fmt: skip

        g = self.head.backward(grad, c_head)
        g = self.dec1.backward(g, c_d1)
        g, g_s1 = F.split_channels(g, c_cat1)
        g = self.up1.backward(g, c_u1)
        g = self.dec2.backward(g, c_d2)
        g, g_s2 = F.split_channels(g, c_cat2)
        g = self.up2.backward(g, c_u2)
        g = self.dec3.backward(g, c_d3)
        g, g_s3 = F.split_channels(g, c_cat3)
        g = self.up3.backward(g, c_u3)

        g = F.relu_backward(g, c_br)
        g = self.bottleneck.backward(g, c_b)

        g = F.maxpool2x2_backward(g, c_p3) + g_s3
        g = self.enc3.backward(g, c_e3)
        g = F.maxpool2x2_backward(g, c_p2) + g_s2
        g = self.enc2.backward(g, c_e2)
        g = F.maxpool2x2_backward(g, c_p1) + g_s1
        return self.enc1.backward(g, c_e1)

    def foreground_probability(self, x: np.ndarray) -> np.ndarray:
        """Softmax probability of the foreground channel, (N, s, s)."""
        logits, _ = self.forward(x)
        return np.exp(log_softmax(logits, axis=1)[:, 1])


def build_refine_net(seed: int, dtype: type[np.floating] = np.float32) -> RefineNet:
    return RefineNet(np.random.default_rng(seed), dtype=dtype)
