"""Inverted sentence index with BM25 scoring.

Scoring: score(q, s) = sum over distinct query terms t of
    idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(s) / avg_len))
with idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)), which is positive for
every df <= N.  Duplicate query terms contribute once; terms are summed
in sorted order so scores are reproducible bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import IndexBuildError
from ..textprep import Sentence, tokenize


@dataclass(frozen=True)
class RetrievalConfig:
    k: int = 2  # sentences kept per query
    bm25_k1: float = 1.2
    bm25_b: float = 0.75

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0.0 <= self.bm25_b <= 1.0:
            raise ValueError("bm25_b must lie in [0, 1]")


@dataclass(frozen=True)
class ScoredSentence:
    sentence: Sentence
    score: float


@dataclass
class SentenceIndex:
    """Immutable once built; postings map term -> [(sentence ordinal, tf)]."""

    sentences: list[Sentence]
    postings: dict[str, list[tuple[int, int]]]
    sentence_lengths: list[int]
    avg_length: float
    doc_counts: dict[str, int] = field(default_factory=dict)

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)

    @property
    def vocabulary(self) -> set[str]:
        return set(self.postings)


def index_terms(sentence: Sentence) -> list[str]:
    """Lowercased non-punctuation surfaces, in sentence order."""
    return [t.surface.lower() for t in sentence.tokens if t.pos != "punctuation"]


def query_terms(message: str) -> list[str]:
    toks = tokenize(message)
    return [t.surface.lower() for t in toks if any(c.isalnum() for c in t.surface)]


def build_index(sentences: list[Sentence]) -> SentenceIndex:
    if not sentences:
        raise IndexBuildError("cannot build an index over an empty sentence collection")
    postings: dict[str, list[tuple[int, int]]] = {}
    lengths: list[int] = []
    doc_counts: dict[str, int] = {}
    for ordinal, sent in enumerate(sentences):
        terms = index_terms(sent)
        lengths.append(len(terms))
        counts: dict[str, int] = {}
        for term in terms:
            counts[term] = counts.get(term, 0) + 1
        for term, tf in counts.items():
            postings.setdefault(term, []).append((ordinal, tf))
        doc_counts[sent.doc_id] = doc_counts.get(sent.doc_id, 0) + 1
    avg = sum(lengths) / len(lengths)
    return SentenceIndex(
        sentences=list(sentences),
        postings={t: postings[t] for t in sorted(postings)},
        sentence_lengths=lengths,
        avg_length=avg,
        doc_counts=doc_counts,
    )


def _idf(index: SentenceIndex, term: str) -> float:
    df = len(index.postings.get(term, ()))
    n = index.n_sentences
    return math.log(1.0 + (n - df + 0.5) / (df + 0.5))


def bm25_score(
    index: SentenceIndex,
    query: list[str],
    ordinal: int,
    config: RetrievalConfig = RetrievalConfig(),
) -> float:
    """Score one sentence (by ordinal) against tokenized query terms."""
    length = index.sentence_lengths[ordinal]
    norm = config.bm25_k1 * (1.0 - config.bm25_b + config.bm25_b * length / index.avg_length)
    score = 0.0
    for term in sorted(set(query)):
        posting = index.postings.get(term)
        if not posting:
            continue
        tf = 0
        for sent_ord, freq in posting:
            if sent_ord == ordinal:
                tf = freq
                break
        if tf == 0:
            continue
        score += _idf(index, term) * (tf * (config.bm25_k1 + 1.0)) / (tf + norm)
    return score


def retrieve_top_k(
    index: SentenceIndex,
    message: str,
    config: RetrievalConfig = RetrievalConfig(),
) -> list[ScoredSentence]:
    """Top-k sentences by BM25, ties broken by (doc_id, sentence index).

    Zero-score sentences are dropped, so fewer than k results (or none)
    is a valid outcome.
    """
    terms = sorted(set(query_terms(message)))
    scores = [0.0] * index.n_sentences
    for term in terms:
        posting = index.postings.get(term)
        if not posting:
            continue
        idf = _idf(index, term)
        for ordinal, tf in posting:
            length = index.sentence_lengths[ordinal]
            norm = config.bm25_k1 * (
                1.0 - config.bm25_b + config.bm25_b * length / index.avg_length
            )
            scores[ordinal] += idf * (tf * (config.bm25_k1 + 1.0)) / (tf + norm)
    scored = [
        (scores[i], index.sentences[i]) for i in range(index.n_sentences) if scores[i] > 0.0
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1].doc_id, pair[1].index))
    return [ScoredSentence(sentence=s, score=sc) for sc, s in scored[: config.k]]
