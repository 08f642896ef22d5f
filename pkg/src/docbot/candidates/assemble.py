"""Candidate response assembly: retrieved sentences plus simple sentences
concatenated from their SVO triples, deduplicated case-insensitively."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..retrieval import ScoredSentence
from .triples import SvoTriple, extract_triples

KIND_RETRIEVED = "retrieved-sentence"
KIND_TRIPLE = "triple-sentence"

_TERMINALS = (".", "!", "?")


@dataclass(frozen=True)
class Candidate:
    text: str
    kind: str  # KIND_RETRIEVED | KIND_TRIPLE
    source: tuple[str, int]
    triple: SvoTriple | None = None

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("candidate text must be non-empty")
        if (self.kind == KIND_TRIPLE) != (self.triple is not None):
            raise ValueError("triple present iff kind is triple-sentence")


@dataclass
class CandidateSet:
    candidates: list[Candidate]

    def __len__(self) -> int:
        return len(self.candidates)

    def texts(self) -> list[str]:
        return [c.text for c in self.candidates]


def triple_to_sentence(triple: SvoTriple) -> str:
    """Concatenate subject, relation and object into one simple sentence."""
    text = " ".join((triple.subject, triple.verb_phrase, triple.object))
    text = text[0].upper() + text[1:]
    if not text.endswith(_TERMINALS):
        text += "."
    return text


def generate_candidates(retrieved: list[ScoredSentence]) -> CandidateSet:
    """Union of retrieved sentences and their triple-sentences.

    Retrieved sentences come first, then triple-sentences, each group in
    (doc_id, sentence index) order; duplicates by case-folded text keep
    the earlier entry, so full sentences beat derived ones.
    """
    ordered = sorted(retrieved, key=lambda r: (r.sentence.doc_id, r.sentence.index))
    out: list[Candidate] = []
    seen: set[str] = set()
    for item in ordered:
        key = item.sentence.text.casefold()
        if key in seen:
            continue
        seen.add(key)
        out.append(
            Candidate(
                text=item.sentence.text,
                kind=KIND_RETRIEVED,
                source=(item.sentence.doc_id, item.sentence.index),
            )
        )
    for item in ordered:
        for triple in extract_triples(item.sentence):
            text = triple_to_sentence(triple)
            key = text.casefold()
            if key in seen:
                continue
            seen.add(key)
            out.append(Candidate(text=text, kind=KIND_TRIPLE, source=triple.source, triple=triple))
    return CandidateSet(candidates=out)


def candidate_to_json(candidate: Candidate) -> dict:
    obj: dict = {
        "text": candidate.text,
        "kind": candidate.kind,
        "doc_id": candidate.source[0],
        "sentence_index": candidate.source[1],
        "triple": None,
    }
    if candidate.triple is not None:
        t = candidate.triple
        obj["triple"] = {
            "subject": t.subject,
            "verb_phrase": t.verb_phrase,
            "object": t.object,
            "subject_span": list(t.subject_span),
            "verb_span": list(t.verb_span),
            "object_span": list(t.object_span),
        }
    return obj


def write_jsonl(candidates: CandidateSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for c in candidates.candidates:
            f.write(json.dumps(candidate_to_json(c), ensure_ascii=False) + "\n")
