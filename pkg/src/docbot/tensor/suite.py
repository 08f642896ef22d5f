"""The finite-difference verification suite behind `docbot gradcheck`.

Every primitive and composite layer is checked at a randomized point:
biases included, so no relu sits exactly at its kink and no gate rests
exactly at saturation symmetry.  All checks run in float64.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .core import Parameter, Tensor
from .gradcheck import GradCheckResult, check_gradients
from .gru import GruParams, gru_step
from .ops import (
    add,
    attn_scores,
    bce_with_logits,
    concat,
    conv2d,
    embedding_lookup,
    matmul,
    maxpool2d,
    mul,
    narrow,
    pad_last2,
    relu,
    reshape,
    sigmoid,
    softmax,
    softmax_xent,
    sub,
    tanh,
    tmean,
    transpose_last2,
    tsum,
)


def _randomize(params: list[Parameter], rng: np.random.Generator, scale: float = 0.4) -> None:
    for p in params:
        p.data[...] = rng.normal(scale=scale, size=p.shape)


def run_suite(progress: Callable[[GradCheckResult], None] | None = None) -> list[GradCheckResult]:
    rng = np.random.default_rng(20240811)
    results: list[GradCheckResult] = []

    def run(name, fwd, inputs, eps=1e-5, stencil5=False):
        res = check_gradients(name, fwd, inputs, eps=eps, stencil5=stencil5)
        results.append(res)
        if progress:
            progress(res)

    # --- primitives -------------------------------------------------------
    a = Parameter(rng.normal(size=(3, 4)), "a")
    b = Parameter(rng.normal(size=(3, 4)), "b")
    w1 = Tensor(rng.normal(size=(3, 4)))
    run("add", lambda _: tsum(mul(add(a, b), w1)), [a, b])
    run("sub", lambda _: tsum(mul(sub(a, b), w1)), [a, b])
    run("mul", lambda _: tsum(mul(mul(a, b), w1)), [a, b])
    bc = Parameter(rng.normal(size=(1, 4)), "bc")
    run("add_broadcast", lambda _: tsum(mul(add(a, bc), w1)), [a, bc])

    m1 = Parameter(rng.normal(size=(3, 4)), "m1")
    m2 = Parameter(rng.normal(size=(4, 5)), "m2")
    w2 = Tensor(rng.normal(size=(3, 5)))
    run("matmul_2x2", lambda _: tsum(mul(matmul(m1, m2), w2)), [m1, m2])
    b1 = Parameter(rng.normal(size=(2, 3, 4)), "b1")
    b2 = Parameter(rng.normal(size=(2, 4, 5)), "b2")
    w3 = Tensor(rng.normal(size=(2, 3, 5)))
    run("matmul_3x3", lambda _: tsum(mul(matmul(b1, b2), w3)), [b1, b2])
    run("matmul_3x2", lambda _: tsum(mul(matmul(b1, m2), w3)), [b1, m2])

    s1 = Parameter(rng.normal(size=(2, 5)), "s1")
    w4 = Tensor(rng.normal(size=(2, 5)))
    run("sigmoid", lambda _: tsum(mul(sigmoid(s1), w4)), [s1])
    run("tanh", lambda _: tsum(mul(tanh(s1), w4)), [s1])
    run("relu", lambda _: tsum(mul(relu(s1), w4)), [s1])
    run("softmax", lambda _: tsum(mul(softmax(s1, axis=1), w4)), [s1])
    run("mean", lambda _: tmean(mul(s1, w4)), [s1])

    c1 = Parameter(rng.normal(size=(2, 3, 4)), "c1")
    c2 = Parameter(rng.normal(size=(2, 2, 4)), "c2")
    w5 = Tensor(rng.normal(size=(2, 5, 4)))
    run("concat", lambda _: tsum(mul(concat([c1, c2], axis=1), w5)), [c1, c2])
    w6 = Tensor(rng.normal(size=(2, 2, 4)))
    run("narrow", lambda _: tsum(mul(narrow(c1, 1, 1, 2), w6)), [c1])
    w6t = Tensor(rng.normal(size=(2, 4, 3)))
    run("transpose", lambda _: tsum(mul(transpose_last2(c1), w6t)), [c1])
    w6r = Tensor(rng.normal(size=(2, 12)))
    run("reshape", lambda _: tsum(mul(reshape(c1, (2, 12)), w6r)), [c1])

    cx = Parameter(rng.normal(size=(2, 2, 5, 5)), "cx")
    cw = Parameter(rng.normal(size=(3, 2, 3, 3)), "cw")
    cb = Parameter(rng.normal(size=(3,)), "cb")
    w7 = Tensor(rng.normal(size=(2, 3, 3, 3)))
    run("conv2d", lambda _: tsum(mul(conv2d(cx, cw, cb), w7)), [cx, cw, cb])
    px = Parameter(rng.normal(size=(2, 2, 7, 7)), "px")
    w8 = Tensor(rng.normal(size=(2, 2, 2, 2)))
    run("maxpool2d", lambda _: tsum(mul(maxpool2d(px, (3, 3), (3, 3)), w8)), [px])
    pp = Parameter(rng.normal(size=(1, 2, 2, 2)), "pp")
    w9 = Tensor(rng.normal(size=(1, 2, 3, 3)))
    run("pad_last2", lambda _: tsum(mul(pad_last2(pp, 3, 3), w9)), [pp])

    table = Parameter(rng.normal(size=(7, 3)), "table")
    ids = np.array([[1, 4, 4], [0, 6, 2]])
    w10 = Tensor(rng.normal(size=(2, 3, 3)))
    run("embedding_lookup", lambda _: tsum(mul(embedding_lookup(table, ids), w10)), [table])

    ap = Parameter(rng.normal(size=(2, 3, 4)), "ap")
    aq = Parameter(rng.normal(size=(2, 3, 4)), "aq")
    av = Parameter(rng.normal(size=(4,)), "av")
    w11 = Tensor(rng.normal(size=(2, 3, 3)))
    run("attn_scores", lambda _: tsum(mul(attn_scores(ap, aq, av), w11)), [ap, aq, av])

    lg = Parameter(rng.normal(size=(6,)), "lg")
    y = np.array([1.0, 0.0, 1.0, 1.0, 0.0, 1.0])
    run("bce_with_logits", lambda _: tmean(bce_with_logits(lg, y)), [lg])
    xl = Parameter(rng.normal(size=(3, 5)), "xl")
    t = np.array([2, 0, 4])
    run("softmax_xent", lambda _: tmean(softmax_xent(xl, t)), [xl])

    # --- composites -------------------------------------------------------
    gru = GruParams.create(3, 4, rng, "gru")
    _randomize(gru.parameters(), rng)
    gx = Parameter(rng.normal(size=(2, 3)), "gx")
    gh = Parameter(rng.normal(size=(2, 4)), "gh")
    w12 = Tensor(rng.normal(size=(2, 4)))
    run(
        "gru_step",
        lambda _: tsum(mul(gru_step(gx, gh, gru), w12)),
        [gx, gh, *gru.parameters()],
    )

    from ..matcher.model import HyperParams, MatcherParams, matcher_loss, _self_match_block, _match_vectors

    hp = HyperParams(
        embed_dim=5, hidden_dim=4, max_utterances=2, max_tokens=4, match_vec_dim=3,
        conv_filters=2, min_token_freq=1, batch_size=2, seed=3,
    )
    mp = MatcherParams.create(20, hp)
    _randomize([mp.conv_b, mp.dense_b, mp.out_b], rng)
    for g in (mp.gru1, mp.gru2, mp.gru_acc):
        _randomize([g.b_z, g.b_r, g.b_h], rng)

    sm_h = Parameter(rng.normal(size=(2, 4, 4)), "sm_h")
    sm_mask = np.array([[1, 1, 1, 0], [1, 1, 0, 0]], dtype=np.float64)
    w13 = Tensor(rng.normal(size=(2, 4, 4)))
    run(
        "self_match_block",
        lambda _: tsum(mul(_self_match_block(sm_h, sm_mask, mp, np.float64), w13)),
        [sm_h, mp.attn_w1, mp.attn_w2, mp.attn_v, mp.gate_w, *mp.gru2.parameters()],
        eps=3e-4,
        stencil5=True,
    )

    mm1 = Parameter(rng.normal(size=(2, 4, 4)), "mm1")
    mm2 = Parameter(rng.normal(size=(2, 4, 4)), "mm2")
    w14 = Tensor(rng.normal(size=(2, 3)))
    run(
        "conv_pool_stack",
        lambda _: tsum(mul(_match_vectors(mm1, mm2, mp), w14)),
        [mm1, mm2, mp.conv_w, mp.conv_b, mp.dense_w, mp.dense_b],
        eps=3e-4,
        stencil5=True,
    )

    ctx = np.array(
        [[[2, 3, 0, 0], [4, 5, 6, 0]], [[7, 8, 9, 2], [3, 11, 0, 0]]], dtype=np.int64
    )
    resp = np.array([[7, 8, 12, 0], [2, 9, 4, 0]], dtype=np.int64)
    labels = np.array([1.0, 0.0])
    run(
        "full_matcher_loss",
        lambda _: matcher_loss(mp, ctx, resp, labels),
        mp.parameters(),
        eps=3e-4,
        stencil5=True,
    )

    hp_ab = HyperParams(
        embed_dim=5, hidden_dim=4, max_utterances=2, max_tokens=4, match_vec_dim=3,
        conv_filters=2, min_token_freq=1, batch_size=2, seed=3, self_match_enabled=False,
    )
    mp_ab = MatcherParams.create(20, hp_ab)
    _randomize([mp_ab.conv_b, mp_ab.dense_b, mp_ab.out_b], rng)
    for g in (mp_ab.gru1, mp_ab.gru_acc):
        _randomize([g.b_z, g.b_r, g.b_h], rng)
    run(
        "full_matcher_loss_no_self_match",
        lambda _: matcher_loss(mp_ab, ctx, resp, labels),
        [p for p in mp_ab.parameters() if p not in mp_ab.self_match_parameters()],
        eps=3e-4,
        stencil5=True,
    )
    return results
