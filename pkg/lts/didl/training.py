"""Mini-batch training and the defect-iteration loop."""

import csv
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from lts.constants import Label
from lts.didl.model import DidlModel, build_model
from lts.didl.predict import classify_histograms
from lts.exceptions import EmptyTrainingSetError, TrainingError
from lts.logging_config import get_logger
from lts.nn.losses import nll_loss
from lts.nn.optim import Adam
from lts.types.config import DidlSettings
from lts.types.histogram import InstancePool
from lts.utils.concurrency import BoundedExecutor

logger = get_logger(__name__)

REPORT_COLUMNS = ["iteration", "subset_size", "accuracy", "defects"]

EpochCallback = Callable[[int, float], None]


@dataclass
class TrainReport:
    """Per-iteration bookkeeping of a defect-iteration run."""

    subset_sizes: list[int] = field(default_factory=list)
    accuracies: list[float] = field(default_factory=list)
    defects: list[int] = field(default_factory=list)
    epoch_losses: list[list[float]] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.subset_sizes)

    def record(self, subset_size: int, accuracy: float, defects: int, losses: list[float]) -> None:
        if self.subset_sizes and subset_size < self.subset_sizes[-1]:
            raise TrainingError("Training subset shrank between iterations")
        self.subset_sizes.append(subset_size)
        self.accuracies.append(accuracy)
        self.defects.append(defects)
        self.epoch_losses.append(list(losses))

    def rows(self) -> list[dict[str, float | int]]:
        return [
            {
                "iteration": i + 1,
                "subset_size": self.subset_sizes[i],
                "accuracy": self.accuracies[i],
                "defects": self.defects[i],
            }
            for i in range(self.iterations)
        ]

    def write_csv(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=REPORT_COLUMNS)
            writer.writeheader()
            writer.writerows(self.rows())


def train_epochs(
    model: DidlModel,
    pool: InstancePool,
    indices: np.ndarray,
    epochs: int,
    lr: float,
    batch: int,
    rng: np.random.Generator,
    optimizer: Adam | None = None,
    on_epoch: EpochCallback | None = None,
) -> list[float]:
    """
    Adam over shuffled mini-batches of the selected instances.

    Args:
        model: Model updated in place
        pool: Instance pool the indices refer to
        indices: Training subset
        epochs: Passes over the subset; 0 leaves the model untouched
        lr: Adam learning rate
        batch: Mini-batch size
        rng: Generator for shuffling
        optimizer: Reuse an optimizer's moments instead of starting fresh
        on_epoch: Called with (epoch, mean loss) after every epoch

    Returns:
        Mean loss per epoch

    Raises:
        EmptyTrainingSetError: If the subset is empty
    """
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        raise EmptyTrainingSetError("Cannot train on an empty subset")
    optimizer = optimizer or Adam(model.parameters(), lr=lr)

    losses: list[float] = []
    for epoch in range(epochs):
        order = rng.permutation(indices)
        total = 0.0
        for start in range(0, order.size, batch):
            chunk = order[start : start + batch]
            optimizer.zero_grad()
            log_probs, cache = model.forward(pool.histograms[chunk])
            loss, grad = nll_loss(log_probs, pool.labels[chunk].astype(np.int64))
            model.backward(grad, cache)
            optimizer.step()
            total += loss * chunk.size
        mean = total / order.size
        if not np.isfinite(mean):
            raise TrainingError(f"Loss diverged at epoch {epoch + 1}")
        losses.append(mean)
        logger.debug(
            f"Epoch {epoch + 1}/{epochs}: loss {mean:.6f}", extra={"epoch": epoch + 1, "loss": mean}
        )
        if on_epoch is not None:
            on_epoch(epoch + 1, mean)
    return losses


def validate_and_collect_defects(
    model: DidlModel,
    pool: InstancePool,
    batch: int,
    executor: BoundedExecutor | None = None,
) -> tuple[float, np.ndarray]:
    """
    Classify every instance of the pool.

    Returns:
        Accuracy and the ascending indices of misclassified instances
    """
    if pool.size == 0:
        raise EmptyTrainingSetError("Cannot validate on an empty pool")
    predicted = classify_histograms(model, pool.histograms, batch, executor)
    defects = np.flatnonzero(predicted != pool.labels)
    accuracy = 1.0 - defects.size / pool.size
    return accuracy, defects


def initial_subset(
    pool: InstancePool,
    fraction: float,
    max_background_ratio: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Random sample of the pool, then background capped at a multiple of foreground.

    The whole pool is used unchanged when `fraction` is 1.
    """
    if fraction >= 1.0:
        return np.arange(pool.size, dtype=np.int64)

    size = max(1, round(fraction * pool.size))
    chosen = np.sort(rng.choice(pool.size, size=size, replace=False))

    labels = pool.labels[chosen]
    background = chosen[labels == Label.BACKGROUND.value]
    foreground_count = int((labels == Label.FOREGROUND.value).sum())
    limit = int(max_background_ratio * foreground_count)
    if foreground_count and background.size > limit:
        dropped = rng.choice(background, size=background.size - limit, replace=False)
        chosen = np.setdiff1d(chosen, dropped)
    return chosen


def defect_iterate(
    pool: InstancePool,
    settings: DidlSettings,
    seed: int,
    dtype: type[np.floating] = np.float32,
    executor: BoundedExecutor | None = None,
    on_epoch: EpochCallback | None = None,
) -> tuple[DidlModel, TrainReport]:
    """
    Train on a subset, validate on the whole pool, add the misclassified
    instances to the subset and continue training.

    The first iteration runs `first_epochs`, later ones `later_epochs`.

    Returns:
        The trained model and the per-iteration report
    """
    if pool.size == 0:
        raise EmptyTrainingSetError("Cannot train on an empty pool")

    rng = np.random.default_rng(seed)
    model = build_model(seed, settings, dtype)
    optimizer = Adam(model.parameters(), lr=settings.lr)
    subset = initial_subset(pool, settings.initial_fraction, settings.max_background_ratio, rng)
    report = TrainReport()

    for iteration in range(1, settings.iterations + 1):
        epochs = settings.first_epochs if iteration == 1 else settings.later_epochs
        logger.info(
            f"Iteration {iteration}/{settings.iterations}: training on {subset.size} instances "
            f"for {epochs} epochs",
            extra={"iteration": iteration, "subset_size": int(subset.size), "epochs": epochs},
        )
        losses = train_epochs(
            model, pool, subset, epochs, settings.lr, settings.batch, rng, optimizer, on_epoch
        )
        accuracy, defects = validate_and_collect_defects(model, pool, settings.batch, executor)
        report.record(int(subset.size), accuracy, int(defects.size), losses)
        logger.info(
            f"Iteration {iteration}: accuracy {accuracy:.4f}, {defects.size} defects",
            extra={"iteration": iteration, "accuracy": accuracy, "defects": int(defects.size)},
        )
        subset = np.union1d(subset, defects)

    return model, report
