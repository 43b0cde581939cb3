"""Learnable parameters and the module base class."""

from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np

from lts.exceptions import CheckpointError


@dataclass(eq=False)
class Parameter:
    """A named array with a gradient buffer of the same shape."""

    name: str
    value: np.ndarray
    grad: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.grad = np.zeros_like(self.value)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.value.shape)

    @property
    def size(self) -> int:
        return int(self.value.size)

    def zero_grad(self) -> None:
        self.grad.fill(0)

    def astype(self, dtype: type[np.floating]) -> None:
        self.value = self.value.astype(dtype)
        self.grad = np.zeros_like(self.value)


class Module:
    """
    Base class for layers and models.

    Subclasses list their parameters in `parameters()` in a fixed order, which
    is also the checkpoint order. Forward passes return a cache that the
    matching backward pass consumes, so a module holds no per-call state and
    can serve concurrent inference.
    """

    def parameters(self) -> list[Parameter]:
        return []

    def named_parameters(self) -> dict[str, Parameter]:
        named: dict[str, Parameter] = {}
        for p in self.parameters():
            if p.name in named:
                raise CheckpointError(f"Duplicate parameter name '{p.name}'")
            named[p.name] = p
        return named

    def __iter__(self) -> Iterator[Parameter]:
        return iter(self.parameters())

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.zero_grad()

    def num_parameters(self) -> int:
        return sum(p.size for p in self.parameters())

    def astype(self, dtype: type[np.floating]) -> "Module":
        for p in self.parameters():
            p.astype(dtype)
        return self

    def state_dict(self) -> dict[str, np.ndarray]:
        return {name: p.value.copy() for name, p in self.named_parameters().items()}

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        """
        Copy arrays into parameters of matching name and shape.

        Raises:
            CheckpointError: On missing, unexpected or misshapen entries
        """
        named = self.named_parameters()
        missing = sorted(set(named) - set(state))
        unexpected = sorted(set(state) - set(named))
        if missing or unexpected:
            raise CheckpointError(
                f"Checkpoint does not match model (missing: {missing}, unexpected: {unexpected})"
            )
        for name, p in named.items():
            if state[name].shape != p.value.shape:
                raise CheckpointError(
                    f"Parameter '{name}' has shape {state[name].shape}, expected {p.value.shape}"
                )
            p.value = state[name].astype(p.value.dtype)
            p.grad = np.zeros_like(p.value)


def uniform_fan_in(
    rng: np.random.Generator,
    shape: tuple[int, ...],
    fan_in: int,
    dtype: type[np.floating] = np.float32,
) -> np.ndarray:
    """Uniform init on ±1/sqrt(fan_in)."""
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)
