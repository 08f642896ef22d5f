"""Multi-turn training data: JSON lines -> padded id arrays.

Corpus format, one example per line:

    {"context": ["utterance", ...], "response": "text", "label": 0 or 1}

Context utterances are oldest first.  Truncation keeps the LAST
max_utterances utterances and the LAST max_tokens tokens of each text;
padding fills with PAD on the right.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DataError
from .vocab import PAD_ID, Vocabulary, text_tokens


@dataclass
class TrainingExample:
    context: list[list[int]]  # <= max_utterances id lists, oldest first
    response: list[int]
    label: int


@dataclass
class RawExample:
    context: list[str]
    response: str
    label: int


def read_dialogue_jsonl(path: str | Path) -> list[RawExample]:
    out: list[RawExample] = []
    with open(path, encoding="utf-8") as f:
        for n, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataError(f"{path}:{n}: invalid JSON ({e.msg})") from None
            try:
                context = [str(u) for u in obj["context"]]
                response = str(obj["response"])
                label = int(obj["label"])
            except (KeyError, TypeError, ValueError):
                raise DataError(f"{path}:{n}: expected context/response/label fields") from None
            if label not in (0, 1):
                raise DataError(f"{path}:{n}: label must be 0 or 1")
            out.append(RawExample(context=context, response=response, label=label))
    return out


def encode_example(raw: RawExample, vocab: Vocabulary, max_utterances: int, max_tokens: int) -> TrainingExample:
    context = [vocab.encode(text_tokens(u))[-max_tokens:] for u in raw.context[-max_utterances:]]
    response = vocab.encode(text_tokens(raw.response))[-max_tokens:]
    return TrainingExample(context=context, response=response, label=raw.label)


def corpus_token_seqs(examples: list[RawExample]) -> list[list[str]]:
    seqs = []
    for ex in examples:
        for u in ex.context:
            seqs.append(text_tokens(u))
        seqs.append(text_tokens(ex.response))
    return seqs


def pad_batch(
    examples: list[TrainingExample], max_utterances: int, max_tokens: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (ctx_ids (B,m,T), resp_ids (B,T), labels (B,)) int64/float arrays."""
    b = len(examples)
    ctx = np.full((b, max_utterances, max_tokens), PAD_ID, dtype=np.int64)
    resp = np.full((b, max_tokens), PAD_ID, dtype=np.int64)
    labels = np.zeros(b, dtype=np.float64)
    for i, ex in enumerate(examples):
        utts = ex.context[-max_utterances:]
        # right-align utterances so the newest sits at slot m-1
        start = max_utterances - len(utts)
        for j, ids in enumerate(utts):
            ids = ids[-max_tokens:]
            ctx[i, start + j, : len(ids)] = ids
        rids = ex.response[-max_tokens:]
        resp[i, : len(rids)] = rids
        labels[i] = ex.label
    return ctx, resp, labels
