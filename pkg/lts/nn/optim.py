"""First-order optimizers updating parameters in place."""

from abc import ABC, abstractmethod

import numpy as np

from lts.constants import ADAM_BETAS, ADAM_EPSILON, RMSPROP_DECAY, RMSPROP_EPSILON
from lts.nn.parameter import Parameter


class Optimizer(ABC):
    def __init__(self, params: list[Parameter], lr: float):
        self.params = list(params)
        self.lr = lr
        self.steps = 0

    def zero_grad(self) -> None:
        for p in self.params:
            p.zero_grad()

    def step(self) -> None:
        self.steps += 1
        for i, p in enumerate(self.params):
            self._update(i, p)

    @abstractmethod
    def _update(self, index: int, param: Parameter) -> None:
        pass


class Adam(Optimizer):
    def __init__(
        self,
        params: list[Parameter],
        lr: float,
        betas: tuple[float, float] = ADAM_BETAS,
        eps: float = ADAM_EPSILON,
    ):
        super().__init__(params, lr)
        self.betas = betas
        self.eps = eps
        self.m = [np.zeros_like(p.value) for p in self.params]
        self.v = [np.zeros_like(p.value) for p in self.params]

    def _update(self, index: int, param: Parameter) -> None:
        b1, b2 = self.betas
        m, v = self.m[index], self.v[index]
        m *= b1
        m += (1 - b1) * param.grad
        v *= b2
        v += (1 - b2) * param.grad**2
        m_hat = m / (1 - b1**self.steps)
        v_hat = v / (1 - b2**self.steps)
        param.value -= (self.lr * m_hat / (np.sqrt(v_hat) + self.eps)).astype(param.value.dtype)


class RMSprop(Optimizer):
    def __init__(
        self,
        params: list[Parameter],
        lr: float,
        decay: float = RMSPROP_DECAY,
        eps: float = RMSPROP_EPSILON,
    ):
        super().__init__(params, lr)
        self.decay = decay
        self.eps = eps
        self.sq = [np.zeros_like(p.value) for p in self.params]

    def _update(self, index: int, param: Parameter) -> None:
        sq = self.sq[index]
        sq *= self.decay
        sq += (1 - self.decay) * param.grad**2
        param.value -= (self.lr * param.grad / (np.sqrt(sq) + self.eps)).astype(param.value.dtype)
