from .chunker import head_is_plural, noun_phrases
from .coref import resolve_coreference
from .pipeline import preprocess_document
from .sentences import split_sentences
from .tagging import PosTagger, load_abbreviations, tag_pos
from .tokenizer import surfaces, tokenize
from .types import POS_TAGS, Mention, RawDocument, Sentence, Token

__all__ = [
    "POS_TAGS",
    "Mention",
    "PosTagger",
    "RawDocument",
    "Sentence",
    "Token",
    "head_is_plural",
    "load_abbreviations",
    "noun_phrases",
    "preprocess_document",
    "resolve_coreference",
    "split_sentences",
    "surfaces",
    "tag_pos",
    "tokenize",
]
