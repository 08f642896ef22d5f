"""Token-id vocabulary with reserved PAD=0 and UNK=1."""

from __future__ import annotations

from collections import Counter
from typing import Iterable

from ..textprep import tokenize

PAD_ID = 0
UNK_ID = 1
PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"


def text_tokens(text: str) -> list[str]:
    """Matcher-side tokenization: lowercased surfaces, punctuation kept."""
    return [t.surface.lower() for t in tokenize(text)]


class Vocabulary:
    def __init__(self, tokens_by_id: list[str]):
        if tokens_by_id[:2] != [PAD_TOKEN, UNK_TOKEN]:
            raise ValueError("vocabulary must reserve PAD=0 and UNK=1")
        self._tokens = list(tokens_by_id)
        self._ids = {tok: i for i, tok in enumerate(self._tokens)}

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    @classmethod
    def build(cls, token_seqs: Iterable[list[str]], min_freq: int = 2) -> "Vocabulary":
        counts: Counter[str] = Counter()
        for seq in token_seqs:
            counts.update(seq)
        kept = [t for t, c in counts.items() if c >= min_freq and t not in (PAD_TOKEN, UNK_TOKEN)]
        kept.sort(key=lambda t: (-counts[t], t))
        return cls([PAD_TOKEN, UNK_TOKEN] + kept)

    def encode(self, tokens: list[str]) -> list[int]:
        return [self._ids.get(t, UNK_ID) for t in tokens]

    def encode_text(self, text: str) -> list[int]:
        return self.encode(text_tokens(text))

    def tokens(self) -> list[str]:
        return list(self._tokens)
