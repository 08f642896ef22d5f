"""Document preprocessing: tokenize, separate, tag, resolve pronouns."""

from __future__ import annotations

from ..errors import DataError
from .coref import resolve_coreference
from .sentences import split_sentences
from .tagging import PosTagger, load_abbreviations
from .tokenizer import tokenize
from .types import RawDocument, Sentence


def preprocess_document(
    doc: RawDocument,
    tagger: PosTagger | None = None,
    abbreviations: tuple[str, ...] | None = None,
) -> list[Sentence]:
    """Turn a raw document into coreference-resolved, POS-tagged sentences."""
    if not doc.text.strip():
        raise DataError(f"document {doc.doc_id!r} has no text")
    if tagger is None:
        tagger = PosTagger.from_file()
    if abbreviations is None:
        abbreviations = load_abbreviations()
    tokens = tokenize(doc.text, abbreviations)
    sentences = split_sentences(doc, tokens)
    tagged = [
        Sentence(s.doc_id, s.index, s.text, tagger.tag(s.tokens)) for s in sentences
    ]
    return resolve_coreference(tagged, tagger, abbreviations)
