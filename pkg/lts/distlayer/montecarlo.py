"""Sampling oracles for the product distribution layer."""

import csv
from collections.abc import Callable
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from lts.constants import BIN_COUNT, BIN_WIDTH, VERIFY_BIMODAL_MEAN, ZERO_BIN
from lts.exceptions import ValidationError
from lts.hist.grid import BIN_VALUES, OVERFLOW, bin_indices
from lts.logging_config import get_logger

logger = get_logger(__name__)

Sampler = Callable[[np.random.Generator, int], np.ndarray]

_CHUNK = 1_000_000


# ============================================================
# Samplers
# ============================================================


def constant_sampler(value: float) -> Sampler:
    def sample(rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, value)

    return sample


def normal_sampler(mean: float = 0.0, std: float = 1.0) -> Sampler:
    def sample(rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.normal(mean, std, size=n)

    return sample


def bimodal_sampler(mean: float = VERIFY_BIMODAL_MEAN, std: float = 1.0) -> Sampler:
    """Equal mixture of N(-mean, std) and N(mean, std)."""

    def sample(rng: np.random.Generator, n: int) -> np.ndarray:
        signs = np.where(rng.random(n) < 0.5, -1.0, 1.0)
        return signs * mean + rng.normal(0.0, std, size=n)

    return sample


def grid_sampler(density: np.ndarray) -> Sampler:
    """
    Draw from a grid density: pick a bin by its mass, then jitter uniformly
    within the bin.
    """
    weights = np.clip(np.asarray(density[:BIN_COUNT], dtype=np.float64), 0.0, None)
    total = weights.sum()
    if total <= 0:
        raise ValidationError("Cannot sample from a density with no mass")
    probabilities = weights / total

    def sample(rng: np.random.Generator, n: int) -> np.ndarray:
        bins = rng.choice(BIN_COUNT, size=n, p=probabilities)
        return BIN_VALUES[bins] + rng.uniform(-BIN_WIDTH / 2, BIN_WIDTH / 2, size=n)

    return sample


# ============================================================
# Estimators
# ============================================================


def sample_density(sampler: Sampler, n_samples: int, seed: int) -> np.ndarray:
    """Grid density of a single sampler: count / (n·Δ)."""
    return monte_carlo_product(sampler, constant_sampler(1.0), n_samples, seed)


def monte_carlo_product(
    x_sampler: Sampler, w_sampler: Sampler, n_samples: int, seed: int
) -> np.ndarray:
    """
    Estimate the grid density of X·W by sampling n pairs.

    Products off the grid are counted in the denominator only.
    Deterministic for a given seed.
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be ≥ 1")
    x_seed, w_seed = np.random.SeedSequence(seed).spawn(2)
    x_rng = np.random.default_rng(x_seed)
    w_rng = np.random.default_rng(w_seed)

    counts = np.zeros(BIN_COUNT + 1, dtype=np.int64)
    remaining = n_samples
    while remaining:
        n = min(_CHUNK, remaining)
        products = x_sampler(x_rng, n) * w_sampler(w_rng, n)
        counts += np.bincount(bin_indices(products), minlength=BIN_COUNT + 1)
        remaining -= n
    return counts[:OVERFLOW] / (n_samples * BIN_WIDTH)


def expected_inverse_magnitude(sampler: Sampler, n_samples: int, seed: int) -> float:
    """Sample mean of 1/|W|."""
    rng = np.random.default_rng(seed)
    total = 0.0
    remaining = n_samples
    while remaining:
        n = min(_CHUNK, remaining)
        total += float((1.0 / np.abs(sampler(rng, n))).sum())
        remaining -= n
    return total / n_samples


def l1_density_distance(a: np.ndarray, b: np.ndarray, exclude_zero_bin: bool = False) -> float:
    """Σ|a - b|·Δ over the grid, optionally leaving out the zero bin."""
    diff = np.abs(np.asarray(a[:BIN_COUNT]) - np.asarray(b[:BIN_COUNT]))
    if exclude_zero_bin:
        diff[ZERO_BIN] = 0.0
    return float(diff.sum() * BIN_WIDTH)


# ============================================================
# Verification experiments
# ============================================================


class ZeroBinReport(BaseModel):
    """Measured against predicted zero-bin density of a product."""

    samples: int
    seed: int
    x_zero_density: float
    expected_inverse: float
    measured_zero_density: float
    predicted_zero_density: float
    relative_error: float

    class Config:
        frozen = True


class DivergenceReport(BaseModel):
    """Zero-bin peak of the product of two standard normals."""

    samples: int
    seed: int
    zero_density: float
    median_density: float
    peak_ratio: float

    class Config:
        frozen = True


def verify_zero_bin_rule(n_samples: int, seed: int) -> tuple[ZeroBinReport, np.ndarray]:
    """
    Check f_Z(0) = f_X(0)·E(1/|W|) for X ~ N(0, 1) and W bimodal at ±4.

    The prediction uses the sampled f_X(0) and the sampled mean of 1/|W|.

    Returns:
        The report and the measured product density
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be ≥ 1")
    x = normal_sampler()
    w = bimodal_sampler()

    product = monte_carlo_product(x, w, n_samples, seed)
    x_density = sample_density(x, n_samples, seed + 1)
    inverse = expected_inverse_magnitude(w, n_samples, seed + 2)

    measured = float(product[ZERO_BIN])
    predicted = float(x_density[ZERO_BIN]) * inverse
    report = ZeroBinReport(
        samples=n_samples,
        seed=seed,
        x_zero_density=float(x_density[ZERO_BIN]),
        expected_inverse=inverse,
        measured_zero_density=measured,
        predicted_zero_density=predicted,
        relative_error=abs(measured - predicted) / predicted if predicted else float("inf"),
    )
    logger.info(
        f"Zero bin measured {measured:.4f}, predicted {predicted:.4f} "
        f"(relative error {report.relative_error:.4f})",
        extra=report.model_dump(),
    )
    return report, product


def divergence_check(n_samples: int, seed: int) -> tuple[DivergenceReport, np.ndarray]:
    """Product of two standard normals: the zero bin towers over the rest."""
    if n_samples < 1:
        raise ValidationError("n_samples must be ≥ 1")
    product = monte_carlo_product(normal_sampler(), normal_sampler(), n_samples, seed)
    median = float(np.median(product))
    report = DivergenceReport(
        samples=n_samples,
        seed=seed,
        zero_density=float(product[ZERO_BIN]),
        median_density=median,
        peak_ratio=float(product[ZERO_BIN]) / median if median > 0 else float("inf"),
    )
    logger.info(f"Zero bin / median bin = {report.peak_ratio:.2f}", extra=report.model_dump())
    return report, product


def write_density_csv(path: Path, density: np.ndarray) -> None:
    """Write (bin_value, density) rows for the 201 grid bins."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["bin_value", "density"])
        for value, d in zip(BIN_VALUES, density[:BIN_COUNT], strict=True):
            writer.writerow([f"{value:.2f}", repr(float(d))])
