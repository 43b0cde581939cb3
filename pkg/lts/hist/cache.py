"""Binary histogram cache.

Layout (little-endian): magic ``LTSH``, version u32, instance count u64,
bins u32, channels u32, then per instance a label byte and 3 x 201 f32 masses.
"""

import struct
from pathlib import Path

import numpy as np

from lts.constants import (
    BIN_COUNT,
    HISTOGRAM_CACHE_MAGIC,
    HISTOGRAM_CACHE_VERSION,
    HISTOGRAM_CHANNELS,
    Label,
)
from lts.exceptions import HistogramCacheError
from lts.logging_config import get_logger
from lts.types.histogram import InstancePool

logger = get_logger(__name__)

_HEADER = struct.Struct("<4sIQII")
_RECORD = np.dtype([("label", "u1"), ("mass", "<f4", (HISTOGRAM_CHANNELS, BIN_COUNT))])


def save_pool(pool: InstancePool, path: Path) -> None:
    """Write a pool to the cache format; coordinates are not stored."""
    records = np.empty(pool.size, dtype=_RECORD)
    records["label"] = pool.labels
    records["mass"] = pool.histograms

    path.parent.mkdir(parents=True, exist_ok=True)
    header = _HEADER.pack(
        HISTOGRAM_CACHE_MAGIC, HISTOGRAM_CACHE_VERSION, pool.size, BIN_COUNT, HISTOGRAM_CHANNELS
    )
    try:
        with path.open("wb") as f:
            f.write(header)
            f.write(records.tobytes())
    except OSError as e:
        raise HistogramCacheError(f"Cannot write histogram cache {path}: {e}") from e

    logger.info(f"Saved {pool.size} instances to {path}", extra={"instances": pool.size})


def load_pool(path: Path) -> InstancePool:
    """
    Read a pool written by `save_pool`.

    Raises:
        HistogramCacheError: On a missing file, wrong magic, version, layout or size
    """
    try:
        data = path.read_bytes()
    except OSError as e:
        raise HistogramCacheError(f"Cannot read histogram cache {path}: {e}") from e

    if len(data) < _HEADER.size:
        raise HistogramCacheError(f"{path} is too short to be a histogram cache")
    magic, version, count, bins, channels = _HEADER.unpack_from(data)
    if magic != HISTOGRAM_CACHE_MAGIC:
        raise HistogramCacheError(f"{path} is not a histogram cache (magic {magic!r})")
    if version != HISTOGRAM_CACHE_VERSION:
        raise HistogramCacheError(f"Unsupported histogram cache version {version}")
    if bins != BIN_COUNT or channels != HISTOGRAM_CHANNELS:
        raise HistogramCacheError(
            f"Cache layout {channels}x{bins} differs from {HISTOGRAM_CHANNELS}x{BIN_COUNT}"
        )
    expected = _HEADER.size + count * _RECORD.itemsize
    if len(data) != expected:
        raise HistogramCacheError(f"{path} holds {len(data)} bytes, expected {expected}")

    records = np.frombuffer(data, dtype=_RECORD, count=count, offset=_HEADER.size)
    labels = records["label"].copy()
    if labels.size and labels.max() >= len(Label):
        raise HistogramCacheError(f"{path} holds an invalid label {int(labels.max())}")

    pool = InstancePool(histograms=records["mass"].astype(np.float32), labels=labels)
    logger.info(f"Loaded {pool.size} instances from {path}", extra={"instances": pool.size})
    return pool
