"""Minimal CPU neural-network kernel: layers, losses, optimizers, checkpoints."""

from .checkpoint import decode_state, encode_state, load_checkpoint, save_checkpoint
from .gradcheck import GradcheckResult, gradcheck, relative_error
from .layers import Conv2d, Dense, DoubleConv, TransposeConv2x2
from .losses import (
    IGNORE_INDEX,
    log_softmax,
    log_softmax_backward,
    nll_loss,
    weighted_cross_entropy,
)
from .optim import Adam, Optimizer, RMSprop
from .parameter import Module, Parameter, uniform_fan_in

__all__ = [
    "IGNORE_INDEX",
    "Adam",
    "Conv2d",
    "Dense",
    "DoubleConv",
    "GradcheckResult",
    "Module",
    "Optimizer",
    "Parameter",
    "RMSprop",
    "TransposeConv2x2",
    "decode_state",
    "encode_state",
    "gradcheck",
    "load_checkpoint",
    "log_softmax",
    "log_softmax_backward",
    "nll_loss",
    "relative_error",
    "save_checkpoint",
    "uniform_fan_in",
    "weighted_cross_entropy",
]
