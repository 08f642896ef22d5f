"""Differentiable primitives over Tensors.

Shape problems raise ShapeError before any computation; every op returns
a fresh Tensor and records its backward closure on the active tape.
Binary elementwise ops broadcast numpy-style (gradients are summed back
over broadcast axes).
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError
from . import kernels
from .core import Tensor, record


def _coerce(x, like: Tensor) -> Tensor:
    if isinstance(x, Tensor):
        return x
    return Tensor(np.asarray(x, dtype=like.dtype))


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, (gd, sd) in enumerate(zip(g.shape, shape)) if sd == 1 and gd != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


def _broadcast_check(a: Tensor, b: Tensor, op: str) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(f"{op}: cannot broadcast {a.shape} with {b.shape}") from None


def add(a, b) -> Tensor:
    a = a if isinstance(a, Tensor) else _coerce(a, b)
    b = _coerce(b, a)
    _broadcast_check(a, b, "add")
    out = Tensor(a.data + b.data)
    record(out, (a, b), lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)))
    return out


def sub(a, b) -> Tensor:
    a = a if isinstance(a, Tensor) else _coerce(a, b)
    b = _coerce(b, a)
    _broadcast_check(a, b, "sub")
    out = Tensor(a.data - b.data)
    record(out, (a, b), lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)))
    return out


def mul(a, b) -> Tensor:
    a = a if isinstance(a, Tensor) else _coerce(a, b)
    b = _coerce(b, a)
    _broadcast_check(a, b, "mul")
    out = Tensor(a.data * b.data)
    record(
        out,
        (a, b),
        lambda g: (_unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)),
    )
    return out


def neg(a: Tensor) -> Tensor:
    out = Tensor(-a.data)
    record(out, (a,), lambda g: (-g,))
    return out


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """2-D x 2-D, batched 3-D x 3-D, or 3-D x 2-D matrix product."""
    if a.ndim < 2 or b.ndim < 2 or a.ndim > 3 or b.ndim > 3:
        raise ShapeError(f"matmul: unsupported ranks {a.shape} @ {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul: inner dims differ, {a.shape} @ {b.shape}")
    if a.ndim == 3 and b.ndim == 3 and a.shape[0] != b.shape[0]:
        raise ShapeError(f"matmul: batch dims differ, {a.shape} @ {b.shape}")
    if a.ndim == 2 and b.ndim == 3:
        raise ShapeError(f"matmul: unsupported ranks {a.shape} @ {b.shape}")
    out = Tensor(a.data @ b.data)

    def backward_fn(g: np.ndarray):
        if a.ndim == 2 and b.ndim == 2:
            return g @ b.data.T, a.data.T @ g
        if b.ndim == 2:  # (B,n,k) @ (k,m)
            ga = g @ b.data.T
            gb = np.einsum("bnk,bnm->km", a.data, g, optimize=True)
            return ga, gb
        # (B,n,k) @ (B,k,m)
        return g @ b.data.swapaxes(-1, -2), a.data.swapaxes(-1, -2) @ g

    record(out, (a, b), backward_fn)
    return out


def transpose_last2(a: Tensor) -> Tensor:
    if a.ndim < 2:
        raise ShapeError(f"transpose_last2: rank-{a.ndim} input {a.shape}")
    out = Tensor(a.data.swapaxes(-1, -2))
    record(out, (a,), lambda g: (g.swapaxes(-1, -2),))
    return out


def reshape(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    out = Tensor(a.data.reshape(shape))
    record(out, (a,), lambda g: (g.reshape(a.shape),))
    return out


def concat(tensors: list[Tensor], axis: int) -> Tensor:
    if not tensors:
        raise ShapeError("concat: empty input list")
    out = Tensor(np.concatenate([t.data for t in tensors], axis=axis))
    sizes = [t.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def backward_fn(g: np.ndarray):
        slicer: list = [slice(None)] * g.ndim
        outs = []
        for i in range(len(tensors)):
            slicer[axis] = slice(int(offsets[i]), int(offsets[i + 1]))
            outs.append(g[tuple(slicer)])
        return tuple(outs)

    record(out, tuple(tensors), backward_fn)
    return out


def narrow(a: Tensor, axis: int, start: int, length: int) -> Tensor:
    """Contiguous slice [start, start+length) along one axis."""
    if start < 0 or start + length > a.shape[axis]:
        raise ShapeError(f"narrow: [{start}, {start + length}) outside {a.shape} axis {axis}")
    slicer: list = [slice(None)] * a.ndim
    slicer[axis] = slice(start, start + length)
    out = Tensor(a.data[tuple(slicer)])

    def backward_fn(g: np.ndarray):
        full = np.zeros_like(a.data)
        full[tuple(slicer)] = g
        return (full,)

    record(out, (a,), backward_fn)
    return out


def pad_last2(a: Tensor, min_h: int, min_w: int) -> Tensor:
    """Zero-pad the last two dims up to at least (min_h, min_w)."""
    ph = max(0, min_h - a.shape[-2])
    pw = max(0, min_w - a.shape[-1])
    if ph == 0 and pw == 0:
        return a
    pad = [(0, 0)] * (a.ndim - 2) + [(0, ph), (0, pw)]
    out = Tensor(np.pad(a.data, pad))
    h, w = a.shape[-2], a.shape[-1]
    record(out, (a,), lambda g: (g[..., :h, :w],))
    return out


def sigmoid(a: Tensor) -> Tensor:
    # exp overflow saturates to inf and 1/(1+inf) is exactly 0, so the
    # single-exp form is correct at both tails
    with np.errstate(over="ignore"):
        y = 1.0 / (1.0 + np.exp(-a.data))
    out = Tensor(y)
    record(out, (a,), lambda g: (g * y * (1.0 - y),))
    return out


def tanh(a: Tensor) -> Tensor:
    y = np.tanh(a.data)
    out = Tensor(y)
    record(out, (a,), lambda g: (g * (1.0 - y * y),))
    return out


def relu(a: Tensor) -> Tensor:
    y = np.maximum(a.data, 0.0)
    out = Tensor(y)
    record(out, (a,), lambda g: (g * (a.data > 0.0),))
    return out


def softmax(a: Tensor, axis: int) -> Tensor:
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    y = e / e.sum(axis=axis, keepdims=True)
    out = Tensor(y)

    def backward_fn(g: np.ndarray):
        dot = (g * y).sum(axis=axis, keepdims=True)
        return ((g - dot) * y,)

    record(out, (a,), backward_fn)
    return out


def tsum(a: Tensor, axis: int | None = None, keepdims: bool = False) -> Tensor:
    out = Tensor(a.data.sum(axis=axis, keepdims=keepdims))

    def backward_fn(g: np.ndarray):
        if axis is None:
            return (np.broadcast_to(g, a.shape).copy(),)
        gg = g if keepdims else np.expand_dims(g, axis)
        return (np.broadcast_to(gg, a.shape).copy(),)

    record(out, (a,), backward_fn)
    return out


def tmean(a: Tensor, axis: int | None = None, keepdims: bool = False) -> Tensor:
    count = a.data.size if axis is None else a.shape[axis]
    out = Tensor(a.data.mean(axis=axis, keepdims=keepdims))

    def backward_fn(g: np.ndarray):
        if axis is None:
            return (np.broadcast_to(g / count, a.shape).copy(),)
        gg = g if keepdims else np.expand_dims(g, axis)
        return (np.broadcast_to(gg / count, a.shape).copy(),)

    record(out, (a,), backward_fn)
    return out


def conv2d(x: Tensor, w: Tensor, b: Tensor | None = None) -> Tensor:
    """Valid-padding stride-1 2-D convolution; x (B,C,H,W), w (F,C,kh,kw)."""
    if x.ndim != 4 or w.ndim != 4:
        raise ShapeError(f"conv2d: need rank-4 input and filters, got {x.shape}, {w.shape}")
    if x.shape[1] != w.shape[1]:
        raise ShapeError(f"conv2d: channel mismatch {x.shape} vs {w.shape}")
    if x.shape[2] < w.shape[2] or x.shape[3] < w.shape[3]:
        raise ShapeError(f"conv2d: input {x.shape} smaller than kernel {w.shape}")
    y = kernels.conv2d_forward(x.data, w.data)
    if b is not None:
        if b.shape != (w.shape[0],):
            raise ShapeError(f"conv2d: bias {b.shape} does not match filters {w.shape}")
        y = y + b.data[None, :, None, None]
    out = Tensor(y)

    def backward_fn(g: np.ndarray):
        gx, gw = kernels.conv2d_backward(x.data, w.data, g)
        gb = g.sum(axis=(0, 2, 3)) if b is not None else None
        return (gx, gw, gb) if b is not None else (gx, gw)

    record(out, (x, w, b) if b is not None else (x, w), backward_fn)
    return out


def maxpool2d(x: Tensor, window: tuple[int, int], stride: tuple[int, int]) -> Tensor:
    """Max pooling; windows are clamped at the right/bottom edges so an
    input smaller than the window yields a single full-input window."""
    if x.ndim != 4:
        raise ShapeError(f"maxpool2d: need rank-4 input, got {x.shape}")
    y, arg = kernels.maxpool2d_forward(x.data, window[0], window[1], stride[0], stride[1])
    out = Tensor(y)
    h, w = x.shape[2], x.shape[3]
    record(out, (x,), lambda g: (kernels.maxpool2d_backward(g, arg, h, w),))
    return out


def embedding_lookup(table: Tensor, ids: np.ndarray) -> Tensor:
    """Row gather: out[..., :] = table[ids[...], :]."""
    ids = np.asarray(ids)
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise ShapeError(f"embedding_lookup: id outside table of {table.shape[0]} rows")
    out = Tensor(table.data[ids])

    def backward_fn(g: np.ndarray):
        gt = np.zeros_like(table.data)
        kernels.embedding_grad(ids, g, gt)
        return (gt,)

    record(out, (table,), backward_fn)
    return out


_ATTN_DENSE_BYTES = 128 << 20  # rank-4 tanh temp cap for the vectorized path


def attn_scores(p: Tensor, q: Tensor, v: Tensor) -> Tensor:
    """Additive attention logits s[b,t,j] = sum_d v[d]*tanh(p[b,j,d]+q[b,t,d]).

    Small problems take the vectorized path and keep the tanh tensor for
    the backward pass; past _ATTN_DENSE_BYTES the streaming numba kernel
    recomputes it instead of materializing O(B*T^2*d) memory.
    """
    if p.ndim != 3 or q.ndim != 3 or v.ndim != 1:
        raise ShapeError(f"attn_scores: need (B,T,d),(B,T,d),(d,), got {p.shape},{q.shape},{v.shape}")
    if p.shape[0] != q.shape[0] or p.shape[2] != q.shape[2] or p.shape[2] != v.shape[0]:
        raise ShapeError(f"attn_scores: incompatible {p.shape},{q.shape},{v.shape}")
    b, t, d = q.shape
    temp_bytes = b * t * p.shape[1] * d * p.data.itemsize
    if temp_bytes <= _ATTN_DENSE_BYTES or not kernels.USE_NUMBA:
        th = kernels._attn_tanh_np(p.data, q.data)
        out = Tensor(th @ v.data)

        def backward_fn(g: np.ndarray):
            return kernels._attn_scores_backward_np(p.data, q.data, v.data, g, th=th)

    else:
        out = Tensor(kernels.attn_scores_forward(p.data, q.data, v.data))

        def backward_fn(g: np.ndarray):
            return kernels.attn_scores_backward(p.data, q.data, v.data, g)

    record(out, (p, q, v), backward_fn)
    return out


def bce_with_logits(logits: Tensor, targets: np.ndarray) -> Tensor:
    """Elementwise binary cross-entropy, numerically stable in the logit."""
    y = np.asarray(targets, dtype=logits.dtype)
    if y.shape != logits.shape:
        raise ShapeError(f"bce_with_logits: targets {y.shape} vs logits {logits.shape}")
    x = logits.data
    loss = np.maximum(x, 0.0) - x * y + np.log1p(np.exp(-np.abs(x)))
    out = Tensor(loss)

    def backward_fn(g: np.ndarray):
        sig = 1.0 / (1.0 + np.exp(-x))
        return (g * (sig - y),)

    record(out, (logits,), backward_fn)
    return out


def softmax_xent(logits: Tensor, targets: np.ndarray) -> Tensor:
    """Per-row cross-entropy of softmax(logits) against integer targets."""
    if logits.ndim != 2:
        raise ShapeError(f"softmax_xent: need (B,V) logits, got {logits.shape}")
    t = np.asarray(targets)
    if t.shape != (logits.shape[0],):
        raise ShapeError(f"softmax_xent: targets {t.shape} vs logits {logits.shape}")
    x = logits.data
    shifted = x - x.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1)) + x.max(axis=1)
    picked = x[np.arange(x.shape[0]), t]
    out = Tensor(lse - picked)

    def backward_fn(g: np.ndarray):
        p = np.exp(shifted)
        p /= p.sum(axis=1, keepdims=True)
        p[np.arange(x.shape[0]), t] -= 1.0
        return (p * g[:, None],)

    record(out, (logits,), backward_fn)
    return out
