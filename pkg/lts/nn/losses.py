"""Log-softmax and cross-entropy losses with their gradients."""

import numpy as np

from lts.exceptions import ShapeError, ValidationError

IGNORE_INDEX = -1


def log_softmax(logits: np.ndarray, axis: int = 1) -> np.ndarray:
    shifted = logits - logits.max(axis=axis, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))


def log_softmax_backward(grad: np.ndarray, log_probs: np.ndarray, axis: int = 1) -> np.ndarray:
    return grad - np.exp(log_probs) * grad.sum(axis=axis, keepdims=True)


def nll_loss(log_probs: np.ndarray, targets: np.ndarray) -> tuple[float, np.ndarray]:
    """
    Mean negative log-likelihood over a batch of (N, K) log-probabilities.

    Returns:
        The loss and its gradient with respect to `log_probs`
    """
    if log_probs.ndim != 2 or targets.shape != (log_probs.shape[0],):
        raise ShapeError(
            f"nll_loss expects (N, K) and (N,), got {log_probs.shape} and {targets.shape}"
        )
    n = log_probs.shape[0]
    if n == 0:
        return 0.0, np.zeros_like(log_probs)
    if targets.min() < 0 or targets.max() >= log_probs.shape[1]:
        raise ValidationError(f"Targets must lie in [0, {log_probs.shape[1] - 1}]")
    rows = np.arange(n)
    loss = -float(log_probs[rows, targets].mean())
    grad = np.zeros_like(log_probs)
    grad[rows, targets] = -1.0 / n
    return loss, grad


def weighted_cross_entropy(
    logits: np.ndarray,
    targets: np.ndarray,
    class_weights: tuple[float, ...],
    normalizer: float | None = None,
) -> tuple[float, np.ndarray]:
    """
    Class-weighted pixel-wise cross-entropy on (N, K, H, W) logits.

    Pixels whose target is `IGNORE_INDEX` contribute nothing. Each counted
    pixel's loss is scaled by its target class weight and the sum is divided
    by the number of counted pixels, or by `normalizer` when a micro-batch
    contributes to a larger batch.

    Returns:
        The loss and its gradient with respect to `logits`
    """
    n, k, h, w = logits.shape
    if targets.shape != (n, h, w):
        raise ShapeError(f"Targets {targets.shape} do not match logits {logits.shape}")
    if len(class_weights) != k:
        raise ShapeError(f"Expected {k} class weights, got {len(class_weights)}")
    if any(weight <= 0 for weight in class_weights):
        raise ValidationError("class weights must be positive")

    log_probs = log_softmax(logits, axis=1)
    valid = targets != IGNORE_INDEX
    safe = np.where(valid, targets, 0).astype(np.intp)
    weights = np.asarray(class_weights, dtype=logits.dtype)[safe] * valid
    total = float(np.count_nonzero(valid)) if normalizer is None else normalizer
    if total == 0.0:
        return 0.0, np.zeros_like(logits)

    picked = np.take_along_axis(log_probs, safe[:, None], axis=1)[:, 0]
    loss = -float((weights * picked).sum()) / total

    grad = np.exp(log_probs)
    np.put_along_axis(
        grad, safe[:, None], np.take_along_axis(grad, safe[:, None], axis=1) - 1.0, axis=1
    )
    grad *= (weights / total)[:, None]
    return loss, grad.astype(logits.dtype, copy=False)
