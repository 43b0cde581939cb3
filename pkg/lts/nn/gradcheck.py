"""Central-difference gradient checking."""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from lts.constants import GRADCHECK_STEP
from lts.nn.parameter import Parameter

_TINY = 1e-12


@dataclass(frozen=True)
class GradcheckResult:
    max_relative_error: float
    worst_parameter: str
    checked_entries: int

    def passed(self, tolerance: float) -> bool:
        return self.max_relative_error <= tolerance


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    """
    Element-wise |a - n| / max(|a|, |n|, floor).

    The floor is a thousandth of the largest analytic magnitude. Entries at
    least that large are held to the full relative tolerance; smaller ones,
    including exact zeros, are measured against the floor instead of their
    own magnitude, which bounds their absolute error by tolerance × floor.
    """
    scale = max(float(np.abs(analytic).max(initial=0.0)) * 1e-3, _TINY)
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), scale)
    return np.abs(analytic - numeric) / denom


def gradcheck(
    loss_fn: Callable[[], float],
    params: list[Parameter],
    h: float = GRADCHECK_STEP,
    max_entries: int | None = None,
    rng: np.random.Generator | None = None,
) -> GradcheckResult:
    """
    Compare analytic gradients with central differences.

    `loss_fn` must zero the gradients, run forward and backward, and return
    the scalar loss. It is called once for the analytic gradients and then
    twice per checked entry. Use float64 parameters.

    Args:
        loss_fn: Forward and backward closure over the parameters
        params: Parameters to check
        h: Finite-difference step
        max_entries: Check at most this many entries per parameter, sampled
        rng: Generator used for sampling entries

    Returns:
        The largest relative error and where it occurred
    """
    loss_fn()
    analytic = {id(p): p.grad.copy() for p in params}
    rng = rng or np.random.default_rng(0)

    worst = 0.0
    worst_name = ""
    checked = 0
    for p in params:
        p.value = np.ascontiguousarray(p.value)
        flat = p.value.reshape(-1)
        indices = np.arange(flat.size)
        if max_entries is not None and flat.size > max_entries:
            indices = np.sort(rng.choice(flat.size, size=max_entries, replace=False))

        numeric = np.empty(indices.size)
        for n, idx in enumerate(indices):
            original = flat[idx]
            flat[idx] = original + h
            plus = loss_fn()
            flat[idx] = original - h
            minus = loss_fn()
            flat[idx] = original
            numeric[n] = (plus - minus) / (2 * h)

        errors = relative_error(analytic[id(p)].reshape(-1)[indices], numeric)
        checked += indices.size
        if errors.size and errors.max() > worst:
            worst = float(errors.max())
            worst_name = p.name

    # leave gradients consistent with the unperturbed parameters
    loss_fn()
    return GradcheckResult(
        max_relative_error=worst, worst_parameter=worst_name, checked_entries=checked
    )
