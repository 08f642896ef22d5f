"""Versioned binary serialization of a sentence index.

Layout (all integers little-endian, strings length-prefixed u32 + UTF-8):

    magic "DBIX" | u16 version | u32 n_sentences | f64 avg_length
    per sentence: str doc_id | u32 sentence_index | u32 term_count
    u32 n_terms
    per term (sorted): str term | u32 n_postings | (u32 ordinal, u32 tf)*

The file stores sentence references, not texts; loading re-binds them
through a resolver mapping (doc_id, sentence_index) -> Sentence.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Callable

from ..errors import DataError
from ..textprep import Sentence
from .index import SentenceIndex

MAGIC = b"DBIX"
VERSION = 1


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<I", len(raw)) + raw


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.off = 0

    def unpack(self, fmt: str):
        vals = struct.unpack_from(fmt, self.data, self.off)
        self.off += struct.calcsize(fmt)
        return vals

    def read_str(self) -> str:
        (n,) = self.unpack("<I")
        raw = self.data[self.off : self.off + n]
        self.off += n
        return raw.decode("utf-8")


def save_index(index: SentenceIndex, path: str | Path) -> None:
    parts = [MAGIC, struct.pack("<H", VERSION)]
    parts.append(struct.pack("<Id", index.n_sentences, index.avg_length))
    for sent, length in zip(index.sentences, index.sentence_lengths):
        parts.append(_pack_str(sent.doc_id))
        parts.append(struct.pack("<II", sent.index, length))
    terms = sorted(index.postings)
    parts.append(struct.pack("<I", len(terms)))
    for term in terms:
        posting = index.postings[term]
        parts.append(_pack_str(term))
        parts.append(struct.pack("<I", len(posting)))
        for ordinal, tf in posting:
            parts.append(struct.pack("<II", ordinal, tf))
    Path(path).write_bytes(b"".join(parts))


def load_index(path: str | Path, resolver: Callable[[str, int], Sentence]) -> SentenceIndex:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise DataError(f"{path}: not a sentence index file")
    r = _Reader(data)
    r.off = 4
    (version,) = r.unpack("<H")
    if version != VERSION:
        raise DataError(f"{path}: unsupported index format version {version}")
    n_sentences, avg_length = r.unpack("<Id")
    sentences: list[Sentence] = []
    lengths: list[int] = []
    doc_counts: dict[str, int] = {}
    for _ in range(n_sentences):
        doc_id = r.read_str()
        sent_index, length = r.unpack("<II")
        sentences.append(resolver(doc_id, sent_index))
        lengths.append(length)
        doc_counts[doc_id] = doc_counts.get(doc_id, 0) + 1
    (n_terms,) = r.unpack("<I")
    postings: dict[str, list[tuple[int, int]]] = {}
    for _ in range(n_terms):
        term = r.read_str()
        (n_postings,) = r.unpack("<I")
        posting = []
        for _ in range(n_postings):
            ordinal, tf = r.unpack("<II")
            posting.append((ordinal, tf))
        postings[term] = posting
    if lengths and abs(sum(lengths) / len(lengths) - avg_length) > 1e-12:
        raise DataError(f"{path}: stored avg_length disagrees with sentence lengths")
    return SentenceIndex(
        sentences=sentences,
        postings=postings,
        sentence_lengths=lengths,
        avg_length=avg_length,
        doc_counts=doc_counts,
    )
