"""Sentence separation over the token stream.

A sentence ends at a standalone terminal-punctuation token (".", "!", "?").
Abbreviations keep their period inside the token and decimals keep theirs
inside the number, so neither can end a sentence.  Trailing quote or
bracket tokens after the terminator attach to the sentence they close.
"""

from __future__ import annotations

from .types import RawDocument, Sentence, Token

_TERMINALS = {".", "!", "?"}
_CLOSERS = {'"', "'", ")", "]", "”", "’"}


def split_sentences(doc: RawDocument, tokens: list[Token]) -> list[Sentence]:
    """Partition `tokens` (spans into doc.text) into non-empty sentences."""
    if not tokens:
        return []
    text_bytes = doc.text.encode("utf-8")
    sentences: list[Sentence] = []
    start = 0
    i = 0
    n = len(tokens)
    while i < n:
        if tokens[i].surface in _TERMINALS:
            j = i + 1
            while j < n and tokens[j].surface in (_TERMINALS | _CLOSERS):
                j += 1
            sentences.append(_make_sentence(doc.doc_id, len(sentences), text_bytes, tokens[start:j]))
            start = j
            i = j
        else:
            i += 1
    if start < n:
        sentences.append(_make_sentence(doc.doc_id, len(sentences), text_bytes, tokens[start:]))
    return sentences


def _make_sentence(doc_id: str, index: int, text_bytes: bytes, tokens: list[Token]) -> Sentence:
    lo = tokens[0].char_span[0]
    hi = tokens[-1].char_span[1]
    text = text_bytes[lo:hi].decode("utf-8")
    rebased = [
        Token(surface=t.surface, char_span=(t.char_span[0] - lo, t.char_span[1] - lo), pos=t.pos)
        for t in tokens
    ]
    return Sentence(doc_id=doc_id, index=index, text=text, tokens=rebased)
