"""Self-attentive sequential matching model.

Scoring pipeline for one (context, response) pair:

  1. embed every utterance and the response; encode each with a shared GRU
  2. self-matching attention per sequence: additive attention of each
     position against all positions of the same sequence, gated fusion of
     the state with its attention context, then a second GRU over the
     fused vectors (skipped entirely when self_match_enabled is false)
  3. two similarity channels per (utterance, response) pair: raw embedding
     dot products, and a bilinear form over the post-attention states
  4. conv2d(valid) -> relu -> maxpool -> dense -> tanh gives one matching
     vector per utterance
  5. an accumulation GRU consumes matching vectors in chronological order;
     the final state maps to a logistic matching probability

PAD positions are masked out of attention and pooling; all-PAD utterances
leave the accumulation state untouched, so a leading empty slot cannot
change the score.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ModelError, ScoringError, ShapeError
from ..tensor import (
    GruParams,
    Parameter,
    Tensor,
    add,
    attn_scores,
    bce_with_logits,
    concat,
    conv2d,
    embedding_lookup,
    load_arrays,
    matmul,
    maxpool2d,
    mul,
    narrow,
    pad_last2,
    relu,
    reshape,
    save_arrays,
    sigmoid,
    softmax,
    sub,
    tanh,
    tmean,
    transpose_last2,
    xavier,
    zeros,
)
from ..tensor.gru import gru_step, gru_step_precomputed
from .vocab import PAD_ID, Vocabulary

_NEG_BIG = 1e30


@dataclass
class HyperParams:
    embed_dim: int = 100
    hidden_dim: int = 100
    max_utterances: int = 10
    max_tokens: int = 50
    match_vec_dim: int = 50
    conv_filters: int = 8
    conv_kernel: int = 3
    pool_window: int = 3
    pool_stride: int = 3
    min_token_freq: int = 2
    batch_size: int = 32
    learning_rate: float = 0.001
    epochs: int = 10
    seed: int = 0
    self_match_enabled: bool = True
    dtype: str = "float64"

    def __post_init__(self) -> None:
        positive = (
            self.embed_dim, self.hidden_dim, self.max_utterances, self.max_tokens,
            self.match_vec_dim, self.conv_filters, self.conv_kernel, self.pool_window,
            self.pool_stride, self.min_token_freq, self.batch_size,
        )
        if any(v <= 0 for v in positive):
            raise ValueError("all dimension hyperparameters must be positive")
        if self.dtype not in ("float32", "float64"):
            raise ValueError(f"unsupported dtype {self.dtype}")

    @property
    def np_dtype(self):
        return np.dtype(self.dtype)

    def conv_feature_dim(self) -> int:
        side = max(self.max_tokens, self.conv_kernel)
        conv_out = side - self.conv_kernel + 1
        pooled = max(1, (conv_out - self.pool_window) // self.pool_stride + 1)
        return self.conv_filters * pooled * pooled


@dataclass
class MatcherParams:
    embedding: Parameter
    gru1: GruParams
    attn_w1: Parameter
    attn_w2: Parameter
    attn_v: Parameter
    gate_w: Parameter
    gru2: GruParams
    bilinear: Parameter
    conv_w: Parameter
    conv_b: Parameter
    dense_w: Parameter
    dense_b: Parameter
    gru_acc: GruParams
    out_w: Parameter
    out_b: Parameter
    hp: HyperParams = field(repr=False)

    @classmethod
    def create(cls, vocab_size: int, hp: HyperParams, seed: int | None = None) -> "MatcherParams":
        rng = np.random.default_rng(hp.seed if seed is None else seed)
        dt = hp.np_dtype
        e, h, q = hp.embed_dim, hp.hidden_dim, hp.match_vec_dim
        return cls(
            embedding=xavier((vocab_size, e), rng, "embedding", dt),
            gru1=GruParams.create(e, h, rng, "gru1", dt),
            attn_w1=xavier((h, h), rng, "attn_w1", dt),
            attn_w2=xavier((h, h), rng, "attn_w2", dt),
            attn_v=xavier((h,), rng, "attn_v", dt),
            gate_w=xavier((2 * h, 2 * h), rng, "gate_w", dt),
            gru2=GruParams.create(2 * h, h, rng, "gru2", dt),
            bilinear=xavier((h, h), rng, "bilinear", dt),
            conv_w=xavier((hp.conv_filters, 2, hp.conv_kernel, hp.conv_kernel), rng, "conv_w", dt),
            conv_b=zeros((hp.conv_filters,), "conv_b", dt),
            dense_w=xavier((hp.conv_feature_dim(), q), rng, "dense_w", dt),
            dense_b=zeros((q,), "dense_b", dt),
            gru_acc=GruParams.create(q, h, rng, "gru_acc", dt),
            out_w=xavier((h,), rng, "out_w", dt),
            out_b=zeros((1,), "out_b", dt),
            hp=hp,
        )

    def parameters(self) -> list[Parameter]:
        out = [self.embedding]
        out += self.gru1.parameters()
        out += [self.attn_w1, self.attn_w2, self.attn_v, self.gate_w]
        out += self.gru2.parameters()
        out += [self.bilinear, self.conv_w, self.conv_b, self.dense_w, self.dense_b]
        out += self.gru_acc.parameters()
        out += [self.out_w, self.out_b]
        return out

    def self_match_parameters(self) -> list[Parameter]:
        return [self.attn_w1, self.attn_w2, self.attn_v, self.gate_w] + self.gru2.parameters()

    def copy_values(self) -> dict[str, np.ndarray]:
        return {p.name: p.data.copy() for p in self.parameters()}

    def load_values(self, values: dict[str, np.ndarray]) -> None:
        for p in self.parameters():
            p.data[...] = values[p.name]


# ---------------------------------------------------------------------------
# forward pieces (batched; public single-sequence ops wrap these)


def _encode_sequence(x: Tensor, mask: np.ndarray, gru: GruParams, dtype) -> Tensor:
    """GRU over axis 1 of x (B,T,d); PAD steps keep the previous state and
    emit zero rows."""
    b, t_len, _ = x.shape
    hidden = gru.hidden_dim
    xz = matmul(x, gru.w_z)
    xr = matmul(x, gru.w_r)
    xh = matmul(x, gru.w_h)
    h = Tensor(np.zeros((b, hidden), dtype=dtype))
    outs = []
    for t in range(t_len):
        h_new = gru_step_precomputed(
            reshape(narrow(xz, 1, t, 1), (b, hidden)),
            reshape(narrow(xr, 1, t, 1), (b, hidden)),
            reshape(narrow(xh, 1, t, 1), (b, hidden)),
            h,
            gru,
        )
        mt = Tensor(mask[:, t : t + 1].astype(dtype))
        inv = Tensor((1.0 - mask[:, t : t + 1]).astype(dtype))
        h = add(mul(h_new, mt), mul(h, inv))
        outs.append(reshape(mul(h, mt), (b, 1, hidden)))
    return concat(outs, axis=1)


def _self_match_block(h_seq: Tensor, mask: np.ndarray, params: MatcherParams, dtype) -> Tensor:
    """Attention of each position against its own sequence, gated fusion,
    then the post-attention GRU."""
    b, t_len, hidden = h_seq.shape
    p = matmul(h_seq, params.attn_w1)
    q = matmul(h_seq, params.attn_w2)
    scores = attn_scores(p, q, params.attn_v)  # (B, T, T)
    blocked = Tensor(((1.0 - mask) * _NEG_BIG)[:, None, :].astype(dtype))
    weights = softmax(sub(scores, blocked), axis=2)
    weights = mul(weights, Tensor(mask[:, :, None].astype(dtype)))
    context = matmul(weights, h_seq)  # (B, T, h)
    fused = concat([h_seq, context], axis=2)  # (B, T, 2h)
    gate = sigmoid(matmul(fused, params.gate_w))
    gated = mul(gate, fused)
    return _encode_sequence(gated, mask, params.gru2, dtype)


def _match_vectors(m1: Tensor, m2: Tensor, params: MatcherParams) -> Tensor:
    """Stack the two similarity channels and reduce to matching vectors."""
    b = m1.shape[0]
    t_u, t_r = m1.shape[1], m1.shape[2]
    k = params.hp.conv_kernel
    image = concat([reshape(m1, (b, 1, t_u, t_r)), reshape(m2, (b, 1, t_u, t_r))], axis=1)
    image = pad_last2(image, k, k)
    conv = relu(conv2d(image, params.conv_w, params.conv_b))
    pooled = maxpool2d(conv, (params.hp.pool_window, params.hp.pool_window),
                       (params.hp.pool_stride, params.hp.pool_stride))
    feat = int(np.prod(pooled.shape[1:]))
    if feat != params.dense_w.shape[0]:
        raise ShapeError(
            f"pooled features {pooled.shape} do not match dense input {params.dense_w.shape}"
        )
    flat = reshape(pooled, (b, feat))
    return tanh(add(matmul(flat, params.dense_w), params.dense_b))


def forward_logits(params: MatcherParams, ctx_ids: np.ndarray, resp_ids: np.ndarray) -> Tensor:
    """Batched matching logits; ctx_ids (B,m,T), resp_ids (B,T) -> (B,)."""
    hp = params.hp
    dtype = hp.np_dtype
    b, m, t_len = ctx_ids.shape
    ctx_flat = ctx_ids.reshape(b * m, t_len)
    ctx_mask = (ctx_flat != PAD_ID).astype(dtype)
    resp_mask = (resp_ids != PAD_ID).astype(dtype)
    utt_valid = ctx_mask.reshape(b, m, t_len).max(axis=2)  # (B, m)

    e_ctx = embedding_lookup(params.embedding, ctx_flat)  # (B*m, T, E)
    e_resp = embedding_lookup(params.embedding, resp_ids)  # (B, T, E)
    h_ctx = _encode_sequence(e_ctx, ctx_mask, params.gru1, dtype)
    h_resp = _encode_sequence(e_resp, resp_mask, params.gru1, dtype)
    if hp.self_match_enabled:
        h_ctx = _self_match_block(h_ctx, ctx_mask, params, dtype)
        h_resp = _self_match_block(h_resp, resp_mask, params, dtype)

    pair_mask = (ctx_mask.reshape(b, m * t_len, 1) * resp_mask.reshape(b, 1, t_len)).astype(dtype)
    m1 = matmul(reshape(e_ctx, (b, m * t_len, hp.embed_dim)), transpose_last2(e_resp))
    m2 = matmul(
        matmul(reshape(h_ctx, (b, m * t_len, hp.hidden_dim)), params.bilinear),
        transpose_last2(h_resp),
    )
    m1 = mul(m1, Tensor(pair_mask))
    m2 = mul(m2, Tensor(pair_mask))
    vecs = _match_vectors(
        reshape(m1, (b * m, t_len, t_len)), reshape(m2, (b * m, t_len, t_len)), params
    )
    vecs = reshape(vecs, (b, m, hp.match_vec_dim))

    h = Tensor(np.zeros((b, hp.hidden_dim), dtype=dtype))
    for i in range(m):
        v_i = reshape(narrow(vecs, 1, i, 1), (b, hp.match_vec_dim))
        h_new = gru_step(v_i, h, params.gru_acc)
        vm = Tensor(utt_valid[:, i : i + 1])
        inv = Tensor(1.0 - utt_valid[:, i : i + 1])
        h = add(mul(h_new, vm), mul(h, inv))
    logit = matmul(h, reshape(params.out_w, (hp.hidden_dim, 1)))  # (B, 1)
    return add(reshape(logit, (b,)), params.out_b)


def matcher_loss(params: MatcherParams, ctx_ids: np.ndarray, resp_ids: np.ndarray, labels: np.ndarray) -> Tensor:
    logits = forward_logits(params, ctx_ids, resp_ids)
    return tmean(bce_with_logits(logits, labels.astype(params.hp.dtype)))


# ---------------------------------------------------------------------------
# single-sequence public operations


def _one_utterance_batch(token_ids: list[int], hp: HyperParams) -> np.ndarray:
    ids = np.full((1, hp.max_tokens), PAD_ID, dtype=np.int64)
    trimmed = token_ids[-hp.max_tokens :]
    ids[0, : len(trimmed)] = trimmed
    return ids


def encode_utterance(token_ids: list[int], params: MatcherParams, hp: HyperParams | None = None) -> np.ndarray:
    """Hidden states (max_tokens, hidden) for one utterance; PAD rows zero."""
    hp = hp or params.hp
    ids = _one_utterance_batch(token_ids, hp)
    mask = (ids != PAD_ID).astype(hp.np_dtype)
    emb = embedding_lookup(params.embedding, ids)
    return _encode_sequence(emb, mask, params.gru1, hp.np_dtype).data[0]


def self_match(h_states: np.ndarray, params: MatcherParams, mask: np.ndarray) -> np.ndarray:
    """Post-attention states (T, hidden) for one encoded sequence."""
    dtype = params.hp.np_dtype
    h = Tensor(h_states[None, :, :].astype(dtype))
    return _self_match_block(h, mask[None, :].astype(dtype), params, dtype).data[0]


def similarity_matrices(
    utt_states: np.ndarray,
    resp_states: np.ndarray,
    utt_emb: np.ndarray,
    resp_emb: np.ndarray,
    bilinear: np.ndarray,
    utt_mask: np.ndarray | None = None,
    resp_mask: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Raw-embedding and bilinear similarity matrices (T_u, T_r)."""
    m1 = utt_emb @ resp_emb.T
    m2 = utt_states @ bilinear @ resp_states.T
    if utt_mask is not None:
        m1 = m1 * utt_mask[:, None]
        m2 = m2 * utt_mask[:, None]
    if resp_mask is not None:
        m1 = m1 * resp_mask[None, :]
        m2 = m2 * resp_mask[None, :]
    return m1, m2


def match_utterance(m1: np.ndarray, m2: np.ndarray, params: MatcherParams) -> np.ndarray:
    """Matching vector (match_vec_dim,) from a similarity matrix pair."""
    dt = params.hp.np_dtype
    return _match_vectors(Tensor(m1[None].astype(dt)), Tensor(m2[None].astype(dt)), params).data[0]


def match_score(context: list[list[int]], response: list[int], params: MatcherParams, hp: HyperParams | None = None) -> float:
    """Matching probability of a response against an ordered context."""
    hp = hp or params.hp
    kept = context[-hp.max_utterances :]
    if not any(len(u) > 0 for u in kept):
        raise ScoringError("match_score needs at least one non-empty context utterance")
    ctx = np.full((1, hp.max_utterances, hp.max_tokens), PAD_ID, dtype=np.int64)
    start = hp.max_utterances - len(kept)
    for j, ids in enumerate(kept):
        trimmed = ids[-hp.max_tokens :]
        ctx[0, start + j, : len(trimmed)] = trimmed
    resp = _one_utterance_batch(response, hp)
    logit = forward_logits(params, ctx, resp)
    return float(1.0 / (1.0 + np.exp(-logit.data[0])))


def score_batch(params: MatcherParams, ctx_ids: np.ndarray, resp_ids: np.ndarray) -> np.ndarray:
    logits = forward_logits(params, ctx_ids, resp_ids).data
    return 1.0 / (1.0 + np.exp(-logits))


# ---------------------------------------------------------------------------
# persistence: container file with vocabulary + hyperparameters in `extra`


def save_matcher(path: str | Path, params: MatcherParams, vocab: Vocabulary) -> None:
    arrays = {p.name: p.data for p in params.parameters()}
    extra = {"kind": "matcher", "hyperparams": asdict(params.hp), "vocab": vocab.tokens()}
    save_arrays(path, arrays, extra)


def load_matcher(path: str | Path) -> tuple[MatcherParams, Vocabulary]:
    arrays, extra = load_arrays(path)
    if extra.get("kind") != "matcher":
        raise ModelError(f"{path}: not a matcher model file")
    hp = HyperParams(**extra["hyperparams"])
    vocab = Vocabulary(extra["vocab"])
    params = MatcherParams.create(len(vocab), hp)
    try:
        params.load_values(arrays)
    except KeyError as e:
        raise ModelError(f"{path}: missing array {e}") from None
    return params, vocab
