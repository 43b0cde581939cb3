"""Near-duplicate removal over histogram instances."""

import numpy as np

from lts.constants import Label
from lts.exceptions import ShapeError, ValidationError
from lts.logging_config import get_logger
from lts.types.histogram import InstancePool, TemporalHistogram
from lts.utils.concurrency import BoundedExecutor

logger = get_logger(__name__)

_BLOCK = 256


def _squared_distances(rows: np.ndarray, x: np.ndarray) -> np.ndarray:
    return ((rows - x) ** 2).sum(axis=1)


def euclidean_distance(
    a: TemporalHistogram | np.ndarray, b: TemporalHistogram | np.ndarray
) -> float:
    """
    Sum of squared bin differences (no square root).

    Accepts single histograms or whole (3, 201) instances.
    """
    va = a.mass if isinstance(a, TemporalHistogram) else np.asarray(a)
    vb = b.mass if isinstance(b, TemporalHistogram) else np.asarray(b)
    if va.shape != vb.shape:
        raise ShapeError(f"Cannot compare histograms of shapes {va.shape} and {vb.shape}")
    flat_a = va.astype(np.float64).reshape(1, -1)
    flat_b = vb.astype(np.float64).reshape(-1)
    return float(_squared_distances(flat_a, flat_b)[0])


def greedy_keep(vectors: np.ndarray, tau: float) -> np.ndarray:
    """
    Scan rows in order; keep a row unless it lies closer than tau to a kept row.

    Candidates are screened in blocks with a matrix product, and every decision
    near the threshold is settled with the direct squared difference.

    Returns:
        Indices of kept rows, ascending
    """
    n = vectors.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if tau <= 0.0:
        return np.arange(n, dtype=np.int64)

    flat = vectors.reshape(n, -1).astype(np.float64)
    norms = (flat**2).sum(axis=1)
    kept = np.empty(n, dtype=np.int64)
    m = 0

    for start in range(0, n, _BLOCK):
        block = flat[start : start + _BLOCK]
        m_before = m
        if m_before:
            kept_rows = flat[kept[:m_before]]
            approx = norms[start : start + len(block), None] + norms[kept[:m_before]][None, :]
            approx -= 2.0 * block @ kept_rows.T
            margin = 1e-6 * (1.0 + approx.max(initial=0.0))

        for r in range(len(block)):
            x = block[r]
            removed = False
            if m_before:
                close = np.flatnonzero(approx[r] < tau + margin)
                if close.size:
                    removed = bool(np.any(_squared_distances(kept_rows[close], x) < tau))
            if not removed and m > m_before:
                removed = bool(np.any(_squared_distances(flat[kept[m_before:m]], x) < tau))
            if not removed:
                kept[m] = start + r
                m += 1

    return kept[:m].copy()


def prune_similar(
    pool: InstancePool,
    tau: float,
    by_label: bool = True,
    executor: BoundedExecutor | None = None,
) -> InstancePool:
    """
    Remove instances closer than tau (strictly) to an earlier kept instance.

    The scan runs in pool order. With `by_label`, each label is scanned
    independently and instances are only compared with kept instances of
    the same label.

    Args:
        pool: Instances to prune
        tau: Distance threshold, summed over the three channels
        by_label: Shard the scan by label
        executor: Optional executor running shards concurrently

    Returns:
        Kept instances in their original order

    Raises:
        ValidationError: If tau is negative or not finite
    """
    if not np.isfinite(tau) or tau < 0:
        raise ValidationError("tau must be ≥ 0")

    if by_label:
        shards = [np.flatnonzero(pool.labels == label.value) for label in Label]
    else:
        shards = [np.arange(pool.size)]
    shards = [s for s in shards if s.size]

    def run(shard: np.ndarray) -> np.ndarray:
        return shard[greedy_keep(pool.histograms[shard], tau)]

    if executor is not None:
        results = executor.map(run, shards)
    else:
        results = [run(s) for s in shards]

    kept = np.sort(np.concatenate(results)) if results else np.zeros(0, dtype=np.int64)
    logger.info(
        f"Pruned {pool.size - kept.size} of {pool.size} instances (tau={tau})",
        extra={"before": pool.size, "after": int(kept.size), "tau": tau},
    )
    return pool.subset(kept)
