"""Verb-phrase pattern SVO extraction.

Relation phrases are maximal token runs matching

    V  |  V P  |  V W* P

over the closed tag set, where V is a verb optionally preceded by a modal
and optionally followed by particles/adverbs, W is in {noun, adjective,
adverb, pronoun, determiner, number} and P is in {preposition, particle,
infinitive-marker}.  Longer matches win.  The subject is the nearest noun
phrase wholly left of the relation (never a relative pronoun), the object
the nearest wholly right; a relation lacking either argument yields no
triple.  A sentence can yield one triple per matched relation.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..textprep import Sentence, noun_phrases

_W_TAGS = {"noun", "adjective", "adverb", "pronoun", "determiner", "number"}
_P_TAGS = {"preposition", "particle", "infinitive-marker"}
_V_TRAIL = {"particle", "adverb"}


@dataclass(frozen=True)
class SvoTriple:
    subject: str
    verb_phrase: str
    object: str
    subject_span: tuple[int, int]
    verb_span: tuple[int, int]
    object_span: tuple[int, int]
    source: tuple[str, int]  # (doc_id, sentence index)


def _surface(sentence: Sentence, span: tuple[int, int]) -> str:
    return " ".join(t.surface for t in sentence.tokens[span[0] : span[1]])


def _relation_candidates(tags: list[str | None], start: int) -> list[tuple[int, int]] | None:
    """Relation spans beginning at `start`, longest first, or None."""
    n = len(tags)
    i = start
    if tags[i] == "modal":
        if i + 1 >= n or tags[i + 1] != "verb":
            return None
        v_end = i + 2
    elif tags[i] == "verb":
        v_end = i + 1
    else:
        return None
    while v_end < n and tags[v_end] in _V_TRAIL:
        v_end += 1
    spans: list[tuple[int, int]] = []
    j = v_end
    while j < n and tags[j] in _W_TAGS:
        j += 1
    if j < n and tags[j] in _P_TAGS and j > v_end:
        spans.append((start, j + 1))  # V W* P
    if v_end < n and tags[v_end] in _P_TAGS:
        spans.append((start, v_end + 1))  # V P
    spans.append((start, v_end))  # V
    return spans


def extract_triples(sentence: Sentence) -> list[SvoTriple]:
    """All SVO triples of a POS-tagged sentence, in relation order."""
    tags = sentence.tags()
    nps = noun_phrases(sentence.tokens)
    triples: list[SvoTriple] = []
    i = 0
    n = len(tags)
    while i < n:
        candidates = _relation_candidates(tags, i)
        if candidates is None:
            i += 1
            continue
        emitted = False
        for rel in candidates:
            subj = _nearest_left(nps, rel[0])
            obj = _nearest_right(nps, rel[1])
            if subj is None or obj is None:
                continue
            triples.append(
                SvoTriple(
                    subject=_surface(sentence, subj),
                    verb_phrase=_surface(sentence, rel),
                    object=_surface(sentence, obj),
                    subject_span=subj,
                    verb_span=rel,
                    object_span=obj,
                    source=(sentence.doc_id, sentence.index),
                )
            )
            i = rel[1]
            emitted = True
            break
        if not emitted:
            i += 1
    return triples


def _nearest_left(nps: list[tuple[int, int]], bound: int) -> tuple[int, int] | None:
    best = None
    for span in nps:
        if span[1] <= bound:
            best = span
    return best


def _nearest_right(nps: list[tuple[int, int]], bound: int) -> tuple[int, int] | None:
    for span in nps:
        if span[0] >= bound:
            return span
    return None
