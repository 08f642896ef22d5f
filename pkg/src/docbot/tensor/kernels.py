"""Hot inner-loop kernels.

Loop-bound kernels (conv backward, max pooling, attention-score loops,
embedding scatter-add) are numba-jitted with pure-numpy fallbacks; set
DOCBOT_DISABLE_NUMBA=1 to force the fallbacks (also taken when numba is
unavailable).  conv2d forward stays on einsum unconditionally: the
BLAS-backed contraction beat the jitted loops at every shape we
measured (see benchmarks/bench_kernels.py).  Both paths compute the
same quantities; summation order may differ at the last few ulps.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("DOCBOT_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

if not _DISABLE:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _DISABLE = True

USE_NUMBA = not _DISABLE


# ---------------------------------------------------------------------------
# numpy implementations (the fallback path, and the reference in tests)


def _conv2d_forward_np(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    kh, kw = w.shape[2], w.shape[3]
    windows = np.lib.stride_tricks.sliding_window_view(x, (kh, kw), axis=(2, 3))
    return np.einsum("bchwij,fcij->bfhw", windows, w, optimize=True).astype(x.dtype, copy=False)


def _conv2d_backward_np(
    x: np.ndarray, w: np.ndarray, gy: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    kh, kw = w.shape[2], w.shape[3]
    windows = np.lib.stride_tricks.sliding_window_view(x, (kh, kw), axis=(2, 3))
    gw = np.einsum("bchwij,bfhw->fcij", windows, gy, optimize=True)
    gy_pad = np.pad(gy, ((0, 0), (0, 0), (kh - 1, kh - 1), (kw - 1, kw - 1)))
    gwin = np.lib.stride_tricks.sliding_window_view(gy_pad, (kh, kw), axis=(2, 3))
    w_flip = w[:, :, ::-1, ::-1]
    gx = np.einsum("bfhwij,fcij->bchw", gwin, w_flip, optimize=True)
    return gx.astype(x.dtype, copy=False), gw.astype(w.dtype, copy=False)


def _maxpool2d_forward_np(
    x: np.ndarray, wh: int, ww: int, sh: int, sw: int
) -> tuple[np.ndarray, np.ndarray]:
    b, c, h, w = x.shape
    oh = max(1, (h - wh) // sh + 1)
    ow = max(1, (w - ww) // sw + 1)
    y = np.empty((b, c, oh, ow), dtype=x.dtype)
    arg = np.empty((b, c, oh, ow), dtype=np.int64)
    for i in range(oh):
        for j in range(ow):
            hi0, wi0 = i * sh, j * sw
            hi1, wi1 = min(hi0 + wh, h), min(wi0 + ww, w)
            window = x[:, :, hi0:hi1, wi0:wi1].reshape(b, c, -1)
            flat = window.argmax(axis=2)
            y[:, :, i, j] = np.take_along_axis(window, flat[:, :, None], axis=2)[:, :, 0]
            win_w = wi1 - wi0
            arg[:, :, i, j] = (hi0 + flat // win_w) * w + (wi0 + flat % win_w)
    return y, arg


def _maxpool2d_backward_np(gy: np.ndarray, arg: np.ndarray, h: int, w: int) -> np.ndarray:
    b, c = gy.shape[0], gy.shape[1]
    gx = np.zeros((b, c, h * w), dtype=gy.dtype)
    flat_g = gy.reshape(b, c, -1)
    flat_a = arg.reshape(b, c, -1)
    for bi in range(b):
        for ci in range(c):
            np.add.at(gx[bi, ci], flat_a[bi, ci], flat_g[bi, ci])
    return gx.reshape(b, c, h, w)


def _attn_tanh_np(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # rank-4 temp (B, T, T, d); callers gate on its size
    return np.tanh(p[:, None, :, :] + q[:, :, None, :])


def _attn_scores_forward_np(p: np.ndarray, q: np.ndarray, v: np.ndarray) -> np.ndarray:
    # s[b, t, j] = sum_d v[d] * tanh(p[b, j, d] + q[b, t, d])
    return _attn_tanh_np(p, q) @ v


def _attn_scores_backward_np(
    p: np.ndarray, q: np.ndarray, v: np.ndarray, gs: np.ndarray, th: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if th is None:
        th = _attn_tanh_np(p, q)
    gv = np.einsum("btjd,btj->d", th, gs, optimize=True)
    inner = (1.0 - th * th) * v
    gp = np.einsum("btjd,btj->bjd", inner, gs, optimize=True)
    gq = np.einsum("btjd,btj->btd", inner, gs, optimize=True)
    return gp.astype(p.dtype, copy=False), gq.astype(q.dtype, copy=False), gv.astype(v.dtype, copy=False)


def _embedding_grad_np(ids: np.ndarray, gy: np.ndarray, gtable: np.ndarray) -> None:
    np.add.at(gtable, ids, gy)


# ---------------------------------------------------------------------------
# numba kernels

if USE_NUMBA:

    @njit(cache=True)
    def _conv2d_backward_nb(x, w, gy):
        b, c, h, wd = x.shape
        f, _, kh, kw = w.shape
        oh, ow = gy.shape[2], gy.shape[3]
        gx = np.zeros_like(x)
        gw = np.zeros_like(w)
        for bi in range(b):
            for fi in range(f):
                for i in range(oh):
                    for j in range(ow):
                        g = gy[bi, fi, i, j]
                        if g == 0.0:
                            continue
                        for ci in range(c):
                            for ki in range(kh):
                                for kj in range(kw):
                                    gx[bi, ci, i + ki, j + kj] += g * w[fi, ci, ki, kj]
                                    gw[fi, ci, ki, kj] += g * x[bi, ci, i + ki, j + kj]
        return gx, gw

    @njit(cache=True)
    def _maxpool2d_forward_nb(x, wh, ww, sh, sw):
        b, c, h, w = x.shape
        oh = max(1, (h - wh) // sh + 1)
        ow = max(1, (w - ww) // sw + 1)
        y = np.empty((b, c, oh, ow), dtype=x.dtype)
        arg = np.empty((b, c, oh, ow), dtype=np.int64)
        for bi in range(b):
            for ci in range(c):
                for i in range(oh):
                    for j in range(ow):
                        hi0 = i * sh
                        wi0 = j * sw
                        hi1 = min(hi0 + wh, h)
                        wi1 = min(wi0 + ww, w)
                        best = x[bi, ci, hi0, wi0]
                        besta = hi0 * w + wi0
                        for ii in range(hi0, hi1):
                            for jj in range(wi0, wi1):
                                val = x[bi, ci, ii, jj]
                                if val > best:
                                    best = val
                                    besta = ii * w + jj
                        y[bi, ci, i, j] = best
                        arg[bi, ci, i, j] = besta
        return y, arg

    @njit(cache=True)
    def _maxpool2d_backward_nb(gy, arg, h, w):
        b, c, oh, ow = gy.shape
        gx = np.zeros((b, c, h * w), dtype=gy.dtype)
        for bi in range(b):
            for ci in range(c):
                for i in range(oh):
                    for j in range(ow):
                        gx[bi, ci, arg[bi, ci, i, j]] += gy[bi, ci, i, j]
        return gx.reshape(b, c, h, w)

    @njit(cache=True)
    def _attn_scores_forward_nb(p, q, v):
        # streaming: O(B T^2) memory instead of the rank-4 temp
        b, t, d = q.shape
        tj = p.shape[1]
        s = np.empty((b, t, tj), dtype=p.dtype)
        for bi in range(b):
            for ti in range(t):
                for ji in range(tj):
                    acc = 0.0
                    for di in range(d):
                        acc += v[di] * np.tanh(p[bi, ji, di] + q[bi, ti, di])
                    s[bi, ti, ji] = acc
        return s

    @njit(cache=True)
    def _attn_scores_backward_nb(p, q, v, gs):
        b, t, d = q.shape
        tj = p.shape[1]
        gp = np.zeros_like(p)
        gq = np.zeros_like(q)
        gv = np.zeros_like(v)
        for bi in range(b):
            for ti in range(t):
                for ji in range(tj):
                    g = gs[bi, ti, ji]
                    if g == 0.0:
                        continue
                    for di in range(d):
                        th = np.tanh(p[bi, ji, di] + q[bi, ti, di])
                        gv[di] += th * g
                        gi = (1.0 - th * th) * v[di] * g
                        gp[bi, ji, di] += gi
                        gq[bi, ti, di] += gi
        return gp, gq, gv

    @njit(cache=True)
    def _embedding_grad_nb(ids, gy, gtable):
        n = ids.shape[0]
        for i in range(n):
            row = ids[i]
            for j in range(gy.shape[1]):
                gtable[row, j] += gy[i, j]


# ---------------------------------------------------------------------------
# dispatch


def conv2d_forward(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    return _conv2d_forward_np(x, w)


def conv2d_backward(x: np.ndarray, w: np.ndarray, gy: np.ndarray):
    if USE_NUMBA:
        return _conv2d_backward_nb(x, w, np.ascontiguousarray(gy))
    return _conv2d_backward_np(x, w, gy)


def maxpool2d_forward(x: np.ndarray, wh: int, ww: int, sh: int, sw: int):
    if USE_NUMBA:
        return _maxpool2d_forward_nb(x, wh, ww, sh, sw)
    return _maxpool2d_forward_np(x, wh, ww, sh, sw)


def maxpool2d_backward(gy: np.ndarray, arg: np.ndarray, h: int, w: int) -> np.ndarray:
    if USE_NUMBA:
        return _maxpool2d_backward_nb(np.ascontiguousarray(gy), arg, h, w)
    return _maxpool2d_backward_np(gy, arg, h, w)


def attn_scores_forward(p: np.ndarray, q: np.ndarray, v: np.ndarray) -> np.ndarray:
    if USE_NUMBA:
        return _attn_scores_forward_nb(p, q, v)
    return _attn_scores_forward_np(p, q, v)


def attn_scores_backward(p: np.ndarray, q: np.ndarray, v: np.ndarray, gs: np.ndarray):
    if USE_NUMBA:
        return _attn_scores_backward_nb(p, q, v, np.ascontiguousarray(gs))
    return _attn_scores_backward_np(p, q, v, gs)


def embedding_grad(ids: np.ndarray, gy: np.ndarray, gtable: np.ndarray) -> None:
    """Scatter-add rows of gy into gtable at positions ids (in-place)."""
    ids_flat = np.ascontiguousarray(ids.reshape(-1))
    gy_flat = np.ascontiguousarray(gy.reshape(ids_flat.shape[0], -1))
    if USE_NUMBA:
        _embedding_grad_nb(ids_flat, gy_flat, gtable)
    else:
        _embedding_grad_np(ids_flat, gy_flat, gtable)
