"""Gradient-check suite over every trainable building block.

Each case is a closure that zeroes gradients, runs forward and backward in
double precision and returns a scalar loss, ready for `lts.nn.gradcheck`.
"""

from collections.abc import Callable
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from lts.constants import BIN_COUNT, GRADCHECK_STEP, HISTOGRAM_CHANNELS
from lts.didl.model import DidlModel
from lts.distlayer.layers import (
    ProductDistributionLayer,
    SumDistributionLayer,
    gaussian_bump_kernels,
)
from lts.logging_config import get_logger
from lts.nn import functional as F
from lts.nn.functional import Cache
from lts.nn.gradcheck import GradcheckResult, gradcheck
from lts.nn.layers import Conv2d, Dense, DoubleConv, TransposeConv2x2
from lts.nn.losses import nll_loss, weighted_cross_entropy
from lts.nn.parameter import Module, Parameter
from lts.sbr.refinenet import RefineNet
from lts.types.config import DidlSettings, ZeroBinRule

logger = get_logger(__name__)

LAYER_TOLERANCE = 1e-5
END_TO_END_TOLERANCE = 1e-4

# Steps small enough that a perturbation rarely crosses a ReLU or pooling kink
KINKED_STEP = 1e-6


@dataclass(frozen=True)
class GradcheckCase:
    name: str
    loss_fn: Callable[[], float]
    params: list[Parameter]
    tolerance: float
    max_entries: int | None = None
    step: float = GRADCHECK_STEP


@dataclass(frozen=True)
class GradcheckOutcome:
    name: str
    result: GradcheckResult
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.result.passed(self.tolerance)


class _Differentiable(Protocol):
    def zero_grad(self) -> None: ...

    def backward(self, grad: np.ndarray, cache: Cache) -> np.ndarray | None: ...


def _projection_loss(
    module: _Differentiable, forward: Callable[[], tuple[np.ndarray, object]], weights: np.ndarray
) -> Callable[[], float]:
    """Loss = Σ y·R for a fixed random R, so dL/dy = R."""

    def loss_fn() -> float:
        module.zero_grad()
        y, cache = forward()
        module.backward(weights, cache)
        return float((y * weights).sum())

    return loss_fn


def _smooth_densities(rng: np.random.Generator, count: int) -> np.ndarray:
    return gaussian_bump_kernels(rng, count, np.float64)[:, :BIN_COUNT]


class _PooledDoubleConv(Module):
    """Double convolution followed by 2x2 max pooling."""

    def __init__(self, block: DoubleConv):
        self.block = block

    def parameters(self) -> list[Parameter]:
        return self.block.parameters()

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Cache]:
        h, block_cache = self.block.forward(x)
        y, pool_cache = F.maxpool2x2_forward(h)
        return y, (block_cache, pool_cache)

    def backward(self, grad: np.ndarray, cache: Cache) -> np.ndarray:
        block_cache, pool_cache = cache
        return self.block.backward(F.maxpool2x2_backward(grad, pool_cache), block_cache)


def _layer_cases(rng: np.random.Generator) -> list[GradcheckCase]:
    cases: list[GradcheckCase] = []

    x = _smooth_densities(rng, 3)
    for rule in ZeroBinRule:
        product = ProductDistributionLayer(
            "product", gaussian_bump_kernels(rng, 2, np.float64), rule
        )
        r = rng.standard_normal((3, 2, BIN_COUNT))
        cases.append(
            GradcheckCase(
                f"product layer ({rule.value})",
                _projection_loss(product, lambda layer=product: layer.forward(x), r),
                product.parameters(),
                LAYER_TOLERANCE,
            )
        )

    summing = SumDistributionLayer("sum", gaussian_bump_kernels(rng, 2, np.float64))
    r = rng.standard_normal((3, 2, BIN_COUNT))
    cases.append(
        GradcheckCase(
            "sum layer",
            _projection_loss(summing, lambda: summing.forward(x), r),
            summing.parameters(),
            LAYER_TOLERANCE,
        )
    )

    image = rng.standard_normal((2, 3, 6, 6))
    conv = Conv2d("conv", 3, 4, 3, rng, padding=1, dtype=np.float64)
    cases.append(
        GradcheckCase(
            "conv2d 3x3",
            _projection_loss(conv, lambda: conv.forward(image), rng.standard_normal((2, 4, 6, 6))),
            conv.parameters(),
            LAYER_TOLERANCE,
        )
    )

    up = TransposeConv2x2("up", 3, 2, rng, dtype=np.float64)
    cases.append(
        GradcheckCase(
            "transpose conv 2x2",
            _projection_loss(up, lambda: up.forward(image), rng.standard_normal((2, 2, 12, 12))),
            up.parameters(),
            LAYER_TOLERANCE,
        )
    )

    pooled = _PooledDoubleConv(DoubleConv("block", 3, 3, rng, dtype=np.float64))
    cases.append(
        GradcheckCase(
            "double conv + maxpool",
            _projection_loss(
                pooled, lambda: pooled.forward(image), rng.standard_normal((2, 3, 3, 3))
            ),
            pooled.parameters(),
            LAYER_TOLERANCE,
            step=KINKED_STEP,
        )
    )

    dense = Dense("dense", 5, 3, rng, dtype=np.float64)
    vectors = rng.standard_normal((4, 5))
    cases.append(
        GradcheckCase(
            "dense",
            _projection_loss(dense, lambda: dense.forward(vectors), rng.standard_normal((4, 3))),
            dense.parameters(),
            LAYER_TOLERANCE,
        )
    )
    return cases


def _didl_case(rng: np.random.Generator) -> GradcheckCase:
    settings = DidlSettings(product_kernels=2, sum_kernels=2, mix_channels=3, hidden_units=8)
    model = DidlModel(settings, rng, np.float64)
    mass = rng.dirichlet(np.ones(BIN_COUNT), size=(5, HISTOGRAM_CHANNELS))
    targets = np.array([0, 1, 2, 1, 0])

    def loss_fn() -> float:
        model.zero_grad()
        log_probs, cache = model.forward(mass)
        loss, grad = nll_loss(log_probs, targets)
        model.backward(grad, cache)
        return loss

    return GradcheckCase(
        "classifier end-to-end",
        loss_fn,
        model.parameters(),
        END_TO_END_TOLERANCE,
        max_entries=12,
        step=KINKED_STEP,
    )


def _refine_case(rng: np.random.Generator) -> GradcheckCase:
    net = RefineNet(rng, widths=(2, 3, 4, 4), dtype=np.float64)
    patches = rng.random((1, 4, 8, 8))
    targets = rng.integers(-1, 2, size=(1, 8, 8)).astype(np.int8)

    def loss_fn() -> float:
        net.zero_grad()
        logits, cache = net.forward(patches)
        loss, grad = weighted_cross_entropy(logits, targets, (0.2, 0.8))
        net.backward(grad, cache)
        return loss

    return GradcheckCase(
        "refine block end-to-end",
        loss_fn,
        net.parameters(),
        END_TO_END_TOLERANCE,
        max_entries=2,
        step=KINKED_STEP,
    )


def gradcheck_cases(seed: int = 0) -> list[GradcheckCase]:
    """All layer checks followed by the two tiny end-to-end networks."""
    rng = np.random.default_rng(seed)
    return _layer_cases(rng) + [_didl_case(rng), _refine_case(rng)]


def run_gradcheck_suite(seed: int = 0) -> list[GradcheckOutcome]:
    outcomes: list[GradcheckOutcome] = []
    for case in gradcheck_cases(seed):
        result = gradcheck(
            case.loss_fn,
            case.params,
            h=case.step,
            max_entries=case.max_entries,
            rng=np.random.default_rng(seed),
        )
        outcome = GradcheckOutcome(case.name, result, case.tolerance)
        logger.info(
            f"gradcheck {case.name}: max relative error {result.max_relative_error:.3e} "
            f"({'ok' if outcome.passed else 'FAILED'})",
            extra={"case": case.name, "max_relative_error": result.max_relative_error},
        )
        outcomes.append(outcome)
    return outcomes
