"""Temporal difference histograms: extraction, labeling, pruning and caching."""

from .cache import load_pool, save_pool
from .extract import extract_histograms, extract_pool, label_instances
from .grid import BIN_VALUES, OVERFLOW, bin_index, bin_indices
from .prune import euclidean_distance, greedy_keep, prune_similar

__all__ = [
    "BIN_VALUES",
    "OVERFLOW",
    "bin_index",
    "bin_indices",
    "euclidean_distance",
    "extract_histograms",
    "extract_pool",
    "greedy_keep",
    "label_instances",
    "load_pool",
    "prune_similar",
    "save_pool",
]
