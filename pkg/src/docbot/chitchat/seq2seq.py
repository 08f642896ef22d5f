"""Attention seq2seq fallback generator.

Encoder GRU reads the query; at each decoder step additive attention
(v.tanh(W_e h_enc + W_d h_dec)) over encoder states produces a context
vector that is concatenated with the previous token embedding and fed to
the decoder GRU; the hidden state projects to vocabulary logits.
Training is teacher-forced cross-entropy over deduplicated pairs.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..errors import DataError, ModelError, TrainingError
from ..tensor import (
    GruParams,
    Optimizer,
    OptimizerConfig,
    Parameter,
    Tape,
    Tensor,
    add,
    backward,
    concat,
    embedding_lookup,
    load_arrays,
    matmul,
    mul,
    narrow,
    reshape,
    save_arrays,
    softmax,
    softmax_xent,
    sub,
    tanh,
    tsum,
    xavier,
    zeros,
)
from ..tensor.gru import gru_step
from ..textprep import tokenize

PAD_ID = 0
UNK_ID = 1
BOS_ID = 2
EOS_ID = 3
_RESERVED = ["<pad>", "<unk>", "<bos>", "<eos>"]
_NEG_BIG = 1e30


@dataclass
class Seq2SeqHyperParams:
    embed_dim: int = 32
    hidden_dim: int = 48
    max_len: int = 20
    learning_rate: float = 0.01
    epochs: int = 60
    batch_size: int = 16
    min_token_freq: int = 1
    seed: int = 0
    dtype: str = "float64"

    @property
    def np_dtype(self):
        return np.dtype(self.dtype)


@dataclass
class DecodeConfig:
    strategy: str = "greedy"  # "greedy" | "beam"
    beam_width: int = 1
    max_len: int = 20

    def __post_init__(self) -> None:
        if self.strategy not in ("greedy", "beam"):
            raise ValueError(f"unknown decode strategy {self.strategy!r}")
        if self.beam_width < 1 or self.max_len < 1:
            raise ValueError("beam_width and max_len must be >= 1")


def chat_tokens(text: str) -> list[str]:
    return [t.surface.lower() for t in tokenize(text)]


class ChatVocab:
    def __init__(self, tokens_by_id: list[str]):
        if tokens_by_id[:4] != _RESERVED:
            raise ValueError("chat vocabulary must reserve pad/unk/bos/eos")
        self._tokens = list(tokens_by_id)
        self._ids = {t: i for i, t in enumerate(self._tokens)}

    def __len__(self) -> int:
        return len(self._tokens)

    @classmethod
    def build(cls, texts: list[str], min_freq: int = 1) -> "ChatVocab":
        from collections import Counter

        counts: Counter[str] = Counter()
        for text in texts:
            counts.update(chat_tokens(text))
        kept = [t for t, c in counts.items() if c >= min_freq and t not in _RESERVED]
        kept.sort(key=lambda t: (-counts[t], t))
        return cls(_RESERVED + kept)

    def encode(self, text: str) -> list[int]:
        return [self._ids.get(t, UNK_ID) for t in chat_tokens(text)]

    def decode(self, ids: list[int]) -> str:
        words = [self._tokens[i] for i in ids if i not in (PAD_ID, BOS_ID, EOS_ID)]
        return detokenize(words)

    def tokens(self) -> list[str]:
        return list(self._tokens)


def detokenize(words: list[str]) -> str:
    out = ""
    for w in words:
        if w in {".", ",", "!", "?", ";", ":", "'s"} or not out:
            out += w
        else:
            out += " " + w
    return out


@dataclass
class Seq2SeqParams:
    embedding: Parameter
    encoder: GruParams
    decoder: GruParams
    attn_enc: Parameter
    attn_dec: Parameter
    attn_v: Parameter
    out_w: Parameter
    out_b: Parameter
    hp: Seq2SeqHyperParams = field(repr=False)
    vocab: ChatVocab = field(repr=False)

    @classmethod
    def create(cls, vocab: ChatVocab, hp: Seq2SeqHyperParams) -> "Seq2SeqParams":
        rng = np.random.default_rng(hp.seed)
        dt = hp.np_dtype
        e, h, v = hp.embed_dim, hp.hidden_dim, len(vocab)
        return cls(
            embedding=xavier((v, e), rng, "embedding", dt),
            encoder=GruParams.create(e, h, rng, "encoder", dt),
            decoder=GruParams.create(e + h, h, rng, "decoder", dt),
            attn_enc=xavier((h, h), rng, "attn_enc", dt),
            attn_dec=xavier((h, h), rng, "attn_dec", dt),
            attn_v=xavier((h,), rng, "attn_v", dt),
            out_w=xavier((h, v), rng, "out_w", dt),
            out_b=zeros((v,), "out_b", dt),
            hp=hp,
            vocab=vocab,
        )

    def parameters(self) -> list[Parameter]:
        return [
            self.embedding,
            *self.encoder.parameters(),
            *self.decoder.parameters(),
            self.attn_enc,
            self.attn_dec,
            self.attn_v,
            self.out_w,
            self.out_b,
        ]


def _encode_query(params: Seq2SeqParams, ids: np.ndarray, mask: np.ndarray):
    """Returns (states (B,T,h) Tensor, final state (B,h) Tensor)."""
    dt = params.hp.np_dtype
    b, t_len = ids.shape
    hidden = params.encoder.hidden_dim
    emb = embedding_lookup(params.embedding, ids)
    h = Tensor(np.zeros((b, hidden), dtype=dt))
    outs = []
    for t in range(t_len):
        x_t = reshape(narrow(emb, 1, t, 1), (b, params.hp.embed_dim))
        h_new = gru_step(x_t, h, params.encoder)
        mt = Tensor(mask[:, t : t + 1].astype(dt))
        h = add(mul(h_new, mt), mul(h, Tensor(1.0 - mask[:, t : t + 1].astype(dt))))
        outs.append(reshape(mul(h, mt), (b, 1, hidden)))
    return concat(outs, axis=1), h


def _attend(params: Seq2SeqParams, enc_states: Tensor, enc_mask: np.ndarray, h_dec: Tensor) -> Tensor:
    """Additive attention context (B,h) for the current decoder state."""
    dt = params.hp.np_dtype
    proj_enc = matmul(enc_states, params.attn_enc)  # (B,T,h)
    proj_dec = matmul(h_dec, params.attn_dec)  # (B,h)
    b, t_len, hidden = enc_states.shape
    scores_in = tanh(add(proj_enc, reshape(proj_dec, (b, 1, hidden))))
    scores = tsum(mul(scores_in, params.attn_v), axis=2)  # (B,T)
    blocked = Tensor(((1.0 - enc_mask) * _NEG_BIG).astype(dt))
    weights = softmax(sub(scores, blocked), axis=1)
    return reshape(matmul(reshape(weights, (b, 1, t_len)), enc_states), (b, hidden))


def _pad_ids(seqs: list[list[int]], t_len: int) -> np.ndarray:
    out = np.full((len(seqs), t_len), PAD_ID, dtype=np.int64)
    for i, s in enumerate(seqs):
        s = s[:t_len]
        out[i, : len(s)] = s
    return out


def train_seq2seq(
    pairs: list[tuple[str, str]],
    hp: Seq2SeqHyperParams = Seq2SeqHyperParams(),
    log=None,
) -> tuple[Seq2SeqParams, list[float]]:
    """Teacher-forced training over deduplicated (query, reply) pairs."""
    unique = list(dict.fromkeys(pairs))
    if not unique:
        raise TrainingError("chit-chat training needs at least one pair")
    vocab = ChatVocab.build([t for pair in unique for t in pair], hp.min_token_freq)
    params = Seq2SeqParams.create(vocab, hp)
    enc_ids = [vocab.encode(q) for q, _ in unique]
    dec_ids = [[BOS_ID] + vocab.encode(r)[: hp.max_len - 1] + [EOS_ID] for _, r in unique]
    opt = Optimizer(params.parameters(), OptimizerConfig(algorithm="adam", lr=hp.learning_rate))
    rng = np.random.default_rng(hp.seed)
    history: list[float] = []
    for epoch in range(hp.epochs):
        order = rng.permutation(len(unique))
        losses = []
        for lo in range(0, len(unique), hp.batch_size):
            idx = order[lo : lo + hp.batch_size]
            opt.zero_grad()
            with Tape() as tape:
                loss_t = _batch_loss(params, [enc_ids[i] for i in idx], [dec_ids[i] for i in idx])
            backward(tape, loss_t)
            opt.step()
            losses.append(loss_t.item())
        history.append(float(np.mean(losses)))
        if log:
            log(f"epoch {epoch}: loss {history[-1]:.4f}")
    return params, history


def _batch_loss(params: Seq2SeqParams, enc_seqs: list[list[int]], dec_seqs: list[list[int]]) -> Tensor:
    dt = params.hp.np_dtype
    b = len(enc_seqs)
    t_enc = max(1, max(len(s) for s in enc_seqs))
    enc = _pad_ids(enc_seqs, t_enc)
    enc_mask = (enc != PAD_ID).astype(dt)
    enc_states, h = _encode_query(params, enc, enc_mask)
    t_dec = max(len(s) for s in dec_seqs)
    dec = _pad_ids(dec_seqs, t_dec)
    total = None
    count = 0.0
    for t in range(t_dec - 1):
        y_prev = dec[:, t]
        y_next = dec[:, t + 1]
        valid = (y_next != PAD_ID).astype(dt)
        emb = embedding_lookup(params.embedding, y_prev)
        context = _attend(params, enc_states, enc_mask, h)
        h = gru_step(concat([emb, context], axis=1), h, params.decoder)
        logits = add(matmul(h, params.out_w), params.out_b)
        step_loss = tsum(mul(softmax_xent(logits, y_next), Tensor(valid)))
        total = step_loss if total is None else add(total, step_loss)
        count += float(valid.sum())
    return mul(total, 1.0 / max(count, 1.0))


def _decode_step(params: Seq2SeqParams, enc_states: Tensor, enc_mask: np.ndarray, h: Tensor, tok: int):
    emb = embedding_lookup(params.embedding, np.array([tok]))
    context = _attend(params, enc_states, enc_mask, h)
    h_new = gru_step(concat([emb, context], axis=1), h, params.decoder)
    logits = (h_new.data @ params.out_w.data + params.out_b.data)[0].astype(np.float64)
    logits[PAD_ID] = -np.inf
    logits[BOS_ID] = -np.inf
    return h_new, logits


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    m = logits.max()
    z = np.log(np.exp(logits - m).sum()) + m
    return logits - z


def greedy_decode(params: Seq2SeqParams, query: str, max_len: int) -> list[int]:
    enc = np.asarray([params.vocab.encode(query) or [UNK_ID]])
    enc_mask = (enc != PAD_ID).astype(params.hp.np_dtype)
    enc_states, h = _encode_query(params, enc, enc_mask)
    out: list[int] = []
    tok = BOS_ID
    for _ in range(max_len):
        h, logits = _decode_step(params, enc_states, enc_mask, h, tok)
        tok = int(np.argmax(logits))
        if tok == EOS_ID:
            break
        out.append(tok)
    return out


def beam_decode(params: Seq2SeqParams, query: str, width: int, max_len: int) -> list[int]:
    """Beam search over log-probabilities; ties break on token id, so
    beam(1) reproduces greedy exactly."""
    enc = np.asarray([params.vocab.encode(query) or [UNK_ID]])
    enc_mask = (enc != PAD_ID).astype(params.hp.np_dtype)
    enc_states, h0 = _encode_query(params, enc, enc_mask)
    beams: list[tuple[float, list[int], Tensor, int]] = [(0.0, [], h0, BOS_ID)]
    finished: list[tuple[float, list[int]]] = []
    for _ in range(max_len):
        expansions: list[tuple[float, list[int], Tensor, int]] = []
        for logp, seq, h, tok in beams:
            h_new, logits = _decode_step(params, enc_states, enc_mask, h, tok)
            logps = _log_softmax(logits)
            top = np.argsort(-logps, kind="stable")[:width]
            for cand in top:
                cand = int(cand)
                if cand == EOS_ID:
                    finished.append((logp + float(logps[cand]), seq))
                else:
                    expansions.append((logp + float(logps[cand]), seq + [cand], h_new, cand))
        if not expansions:
            break
        expansions.sort(key=lambda e: (-e[0], e[1]))
        beams = expansions[:width]
    finished.extend((logp, seq) for logp, seq, _, _ in beams)
    finished.sort(key=lambda e: (-e[0], e[1]))
    return finished[0][1]


def generate_reply(query: str, params: Seq2SeqParams, cfg: DecodeConfig = DecodeConfig()) -> str:
    if cfg.strategy == "beam" and cfg.beam_width > 1:
        ids = beam_decode(params, query, cfg.beam_width, cfg.max_len)
    elif cfg.strategy == "beam":
        ids = beam_decode(params, query, 1, cfg.max_len)
    else:
        ids = greedy_decode(params, query, cfg.max_len)
    return params.vocab.decode(ids)


def read_pairs_jsonl(path: str | Path) -> list[tuple[str, str]]:
    pairs = []
    with open(path, encoding="utf-8") as f:
        for n, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                pairs.append((str(obj["query"]), str(obj["reply"])))
            except (json.JSONDecodeError, KeyError, TypeError):
                raise DataError(f"{path}:{n}: expected JSON with query/reply fields") from None
    return pairs


def save_seq2seq(path: str | Path, params: Seq2SeqParams) -> None:
    arrays = {p.name: p.data for p in params.parameters()}
    extra = {"kind": "seq2seq", "hyperparams": asdict(params.hp), "vocab": params.vocab.tokens()}
    save_arrays(path, arrays, extra)


def load_seq2seq(path: str | Path) -> Seq2SeqParams:
    arrays, extra = load_arrays(path)
    if extra.get("kind") != "seq2seq":
        raise ModelError(f"{path}: not a chit-chat model file")
    hp = Seq2SeqHyperParams(**extra["hyperparams"])
    vocab = ChatVocab(extra["vocab"])
    params = Seq2SeqParams.create(vocab, hp)
    values = {p.name: p for p in params.parameters()}
    for name, arr in arrays.items():
        values[name].data[...] = arr
    return params
