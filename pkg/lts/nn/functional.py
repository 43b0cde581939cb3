"""Stateless forward and backward kernels on (N, C, H, W) arrays.

Every ``*_forward`` returns ``(output, cache)``; the matching ``*_backward``
takes the output gradient and that cache.
"""

from typing import Any

import numpy as np

from lts.exceptions import ShapeError

Cache = Any


# ============================================================
# Convolution
# ============================================================


def _conv_output_size(size: int, kernel: int, stride: int, padding: int) -> int:
    out = (size + 2 * padding - kernel) // stride + 1
    if out < 1:
        raise ShapeError(
            f"Kernel {kernel} with padding {padding} does not fit an input of size {size}"
        )
    return out


def conv2d_forward(
    x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int = 1, padding: int = 0
) -> tuple[np.ndarray, Cache]:
    """
    Cross-correlation of x (N, C, H, W) with w (F, C, kh, kw) plus bias (F,).

    The sum runs over kernel taps, one matrix product per tap.
    """
    if x.ndim != 4 or w.ndim != 4:
        raise ShapeError(f"conv2d expects 4-D input and weights, got {x.shape} and {w.shape}")
    n, c, h, wd = x.shape
    f, wc, kh, kw = w.shape
    if wc != c:
        raise ShapeError(f"conv2d weights expect {wc} input channels, got {c}")
    if b.shape != (f,):
        raise ShapeError(f"conv2d bias must be ({f},), got {b.shape}")

    ho = _conv_output_size(h, kh, stride, padding)
    wo = _conv_output_size(wd, kw, stride, padding)
    xp = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding))) if padding else x

    out = np.zeros((f, n, ho, wo), dtype=np.result_type(x, w))
    for a in range(kh):
        for q in range(kw):
            window = xp[:, :, a : a + stride * ho : stride, q : q + stride * wo : stride]
            out += np.tensordot(w[:, :, a, q], window, axes=([1], [1]))
    out = out.transpose(1, 0, 2, 3) + b[None, :, None, None]
    return np.ascontiguousarray(out), (xp, w, stride, padding, x.shape)


def conv2d_backward(
    grad: np.ndarray, cache: Cache
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients with respect to input, weights and bias."""
    xp, w, stride, padding, x_shape = cache
    _, _, kh, kw = w.shape
    _, _, ho, wo = grad.shape

    dxp = np.zeros_like(xp)
    dw = np.zeros_like(w)
    for a in range(kh):
        for q in range(kw):
            rows = slice(a, a + stride * ho, stride)
            cols = slice(q, q + stride * wo, stride)
            window = xp[:, :, rows, cols]
            dw[:, :, a, q] = np.tensordot(grad, window, axes=([0, 2, 3], [0, 2, 3]))
            dxp[:, :, rows, cols] += np.tensordot(grad, w[:, :, a, q], axes=([1], [0])).transpose(
                0, 3, 1, 2
            )
    db = grad.sum(axis=(0, 2, 3))

    if padding:
        h, wd = x_shape[2], x_shape[3]
        dx = dxp[:, :, padding : padding + h, padding : padding + wd]
    else:
        dx = dxp
    return np.ascontiguousarray(dx), dw, db


# ============================================================
# Pooling and upsampling
# ============================================================


def maxpool2x2_forward(x: np.ndarray) -> tuple[np.ndarray, Cache]:
    """2x2 max pooling with stride 2; ties go to the first element in row-major order."""
    n, c, h, w = x.shape
    if h % 2 or w % 2:
        raise ShapeError(f"maxpool2x2 needs even spatial dims, got {h}x{w}")
    blocks = x.reshape(n, c, h // 2, 2, w // 2, 2).transpose(0, 1, 2, 4, 3, 5)
    blocks = blocks.reshape(n, c, h // 2, w // 2, 4)
    idx = blocks.argmax(axis=-1)
    out = np.take_along_axis(blocks, idx[..., None], axis=-1)[..., 0]
    return out, (idx, x.shape)


def maxpool2x2_backward(grad: np.ndarray, cache: Cache) -> np.ndarray:
    idx, (n, c, h, w) = cache
    blocks = np.zeros((n, c, h // 2, w // 2, 4), dtype=grad.dtype)
    np.put_along_axis(blocks, idx[..., None], grad[..., None], axis=-1)
    dx = blocks.reshape(n, c, h // 2, w // 2, 2, 2).transpose(0, 1, 2, 4, 3, 5)
    return dx.reshape(n, c, h, w)


def transpose_conv2x2_forward(
    x: np.ndarray, w: np.ndarray, b: np.ndarray
) -> tuple[np.ndarray, Cache]:
    """
    Transposed convolution with kernel 2 and stride 2: doubles H and W.

    Weights are (C_in, C_out, 2, 2).
    """
    n, c, h, wd = x.shape
    if w.ndim != 4 or w.shape[0] != c or w.shape[2:] != (2, 2):
        raise ShapeError(f"transpose conv weights must be ({c}, C_out, 2, 2), got {w.shape}")
    out = np.einsum("nchw,coab->nohawb", x, w, optimize=True)
    out = out.reshape(n, w.shape[1], 2 * h, 2 * wd) + b[None, :, None, None]
    return out, (x, w)


def transpose_conv2x2_backward(
    grad: np.ndarray, cache: Cache
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x, w = cache
    n, _, h, wd = x.shape
    g = grad.reshape(n, w.shape[1], h, 2, wd, 2)
    dx = np.einsum("nohawb,coab->nchw", g, w, optimize=True)
    dw = np.einsum("nchw,nohawb->coab", x, g, optimize=True)
    db = grad.sum(axis=(0, 2, 3))
    return dx, dw, db


def concat_channels(parts: list[np.ndarray]) -> tuple[np.ndarray, Cache]:
    return np.concatenate(parts, axis=1), [p.shape[1] for p in parts]


def split_channels(grad: np.ndarray, cache: Cache) -> list[np.ndarray]:
    bounds = np.cumsum(cache)[:-1]
    return np.split(grad, bounds, axis=1)


# ============================================================
# Pointwise and dense
# ============================================================


def relu_forward(x: np.ndarray) -> tuple[np.ndarray, Cache]:
    mask = x > 0
    return x * mask, mask


def relu_backward(grad: np.ndarray, cache: Cache) -> np.ndarray:
    return grad * cache


def dense_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, Cache]:
    """Fully connected layer: x (N, D), w (O, D), b (O,)."""
    if x.ndim != 2 or w.ndim != 2 or x.shape[1] != w.shape[1]:
        raise ShapeError(f"dense expects (N, {w.shape[1]}) input, got {x.shape}")
    return x @ w.T + b, (x, w)


def dense_backward(
    grad: np.ndarray, cache: Cache
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x, w = cache
    return grad @ w, grad.T @ x, grad.sum(axis=0)
