"""Refine-block training on multi-scale patches."""

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from lts.exceptions import EmptyTrainingSetError, ShapeError, TrainingError
from lts.logging_config import get_logger
from lts.nn.losses import IGNORE_INDEX, weighted_cross_entropy
from lts.nn.optim import RMSprop
from lts.sbr.refinenet import RefineNet, build_refine_net
from lts.sbr.sampling import corrupt_mask, sample_training_patches
from lts.types.config import SbrSettings
from lts.types.video import FrameSequence, LabelMask

logger = get_logger(__name__)

EpochCallback = Callable[[int, float], None]


@dataclass(frozen=True)
class TrainingPair:
    """An RGB frame, the foreground plane to refine, and the ground truth."""

    image: np.ndarray
    foreground: np.ndarray
    gt: LabelMask

    def __post_init__(self) -> None:
        if self.image.shape[:2] != self.gt.shape or self.foreground.shape != self.gt.shape:
            raise ShapeError("Image, foreground plane and ground truth must share H x W")


def surrogate_pairs(
    seq: FrameSequence,
    gt: Sequence[LabelMask],
    settings: SbrSettings,
    rng: np.random.Generator,
) -> list[TrainingPair]:
    """Pairs whose foreground input is the ground truth with noise and erosion applied."""
    if len(gt) != seq.frame_count:
        raise ShapeError(f"Got {len(gt)} masks for {seq.frame_count} frames")
    rgb = seq.to_rgb()
    return [
        TrainingPair(
            image=rgb.frame(t),
            foreground=corrupt_mask(
                mask.foreground(), rng, settings.salt_pepper_rate, settings.nibble_probability
            ),
            gt=mask,
        )
        for t, mask in enumerate(gt)
    ]


def _pool_patches(
    pairs: Sequence[TrainingPair], settings: SbrSettings, rng: np.random.Generator
) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    inputs: dict[int, list[np.ndarray]] = {}
    targets: dict[int, list[np.ndarray]] = {}
    for pair in pairs:
        sampled = sample_training_patches(pair.image, pair.foreground, pair.gt, settings, rng)
        for scale, (x, y) in sampled.items():
            inputs.setdefault(scale, []).append(x)
            targets.setdefault(scale, []).append(y)
    return {
        scale: (np.concatenate(inputs[scale]), np.concatenate(targets[scale]))
        for scale in sorted(inputs)
    }


def _train_batch(
    net: RefineNet,
    x: np.ndarray,
    y: np.ndarray,
    weights: tuple[float, float],
    micro_batch: int,
) -> float:
    """Accumulate gradients of one logical batch over micro-batches; returns its loss."""
    valid = y != IGNORE_INDEX
    normalizer = float(np.count_nonzero(valid))
    if normalizer == 0.0:
        return 0.0
    loss = 0.0
    for start in range(0, x.shape[0], micro_batch):
        xs = x[start : start + micro_batch]
        ys = y[start : start + micro_batch]
        logits, cache = net.forward(xs)
        part, grad = weighted_cross_entropy(logits, ys, weights, normalizer)
        net.backward(grad, cache)
        loss += part
    return loss


def train_sbr(
    pairs: Sequence[TrainingPair],
    settings: SbrSettings,
    seed: int,
    dtype: type[np.floating] = np.float32,
    net: RefineNet | None = None,
    on_epoch: EpochCallback | None = None,
) -> tuple[RefineNet, list[float]]:
    """
    Train the refine block with RMSprop and class-weighted cross-entropy.

    Patches are cropped once per image at each scale, pooled per scale and
    reshuffled every epoch; each scale trains with its own batch size.

    Returns:
        The trained net and the mean batch loss of every epoch

    Raises:
        EmptyTrainingSetError: If there are no pairs or no scale fits any image
    """
    if not pairs:
        raise EmptyTrainingSetError("Cannot train the refine block on an empty corpus")
    rng = np.random.default_rng(seed)
    net = net or build_refine_net(seed, dtype)
    pooled = _pool_patches(pairs, settings, rng)
    if not pooled:
        raise EmptyTrainingSetError(
            f"No configured patch scale {settings.scales} fits the training images"
        )
    for scale, (x, _) in pooled.items():
        logger.info(
            f"Scale {scale}: {x.shape[0]} patches, batch {settings.batch_size(scale)}",
            extra={"scale": scale, "patches": int(x.shape[0])},
        )

    optimizer = RMSprop(net.parameters(), lr=settings.lr)
    weights = (settings.bg_weight, settings.fg_weight)
    losses: list[float] = []
    for epoch in range(settings.epochs):
        batch_losses: list[float] = []
        for scale, (x, y) in pooled.items():
            order = rng.permutation(x.shape[0])
            batch = settings.batch_size(scale)
            for start in range(0, order.size, batch):
                chunk = order[start : start + batch]
                optimizer.zero_grad()
                batch_losses.append(
                    _train_batch(net, x[chunk], y[chunk], weights, settings.micro_batch)
                )
                optimizer.step()
        mean = float(np.mean(batch_losses))
        if not np.isfinite(mean):
            raise TrainingError(f"Refine loss diverged at epoch {epoch + 1}")
        losses.append(mean)
        logger.info(
            f"Refine epoch {epoch + 1}/{settings.epochs}: loss {mean:.6f}",
            extra={"epoch": epoch + 1, "loss": mean},
        )
        if on_epoch is not None:
            on_epoch(epoch + 1, mean)
    return net, losses
