"""Deterministic noun-phrase chunker shared by coreference and triple
extraction: a noun phrase is a maximal run of {determiner, adjective,
number, noun, proper-noun} tokens ending in a noun or proper-noun."""

from __future__ import annotations

from .types import Token

_CHUNK_TAGS = {"determiner", "adjective", "number", "noun", "proper-noun"}
_HEAD_TAGS = {"noun", "proper-noun"}

# irregular plurals the suffix heuristic would miss
_IRREGULAR_PLURALS = {
    "men", "women", "children", "people", "feet", "teeth", "mice", "geese", "data", "media",
}
_SINGULAR_S_ENDINGS = ("ss", "us", "is", "news")


def noun_phrases(tokens: list[Token]) -> list[tuple[int, int]]:
    """Return half-open token index ranges of noun phrases, left to right."""
    spans: list[tuple[int, int]] = []
    i = 0
    n = len(tokens)
    while i < n:
        if tokens[i].pos in _CHUNK_TAGS:
            j = i
            while j < n and tokens[j].pos in _CHUNK_TAGS:
                j += 1
            # trim the run back to its last nominal head
            k = j - 1
            while k >= i and tokens[k].pos not in _HEAD_TAGS:
                k -= 1
            if k >= i:
                spans.append((i, k + 1))
            i = j
        else:
            i += 1
    return spans


def head_is_plural(tokens: list[Token], span: tuple[int, int]) -> bool:
    head = tokens[span[1] - 1].surface.lower()
    if head in _IRREGULAR_PLURALS:
        return True
    if head.endswith("s") and not head.endswith(_SINGULAR_S_ENDINGS) and len(head) > 2:
        return True
    return False
