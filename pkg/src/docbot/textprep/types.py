"""Core text units: tokens, sentences, documents, mentions."""

from __future__ import annotations

from dataclasses import dataclass, field

# Closed POS tag set.  Tags outside this set are rejected by the tagger.
POS_TAGS = frozenset(
    {
        "noun",
        "proper-noun",
        "pronoun",
        "verb",
        "modal",
        "adjective",
        "adverb",
        "determiner",
        "preposition",
        "particle",
        "infinitive-marker",
        "number",
        "punctuation",
        "other",
    }
)


@dataclass
class Token:
    """A surface form with an optional POS tag and its byte span.

    char_span is a half-open [start, end) pair of UTF-8 byte offsets into
    the text the token was cut from (document text at tokenize time,
    sentence text once attached to a Sentence).
    """

    surface: str
    char_span: tuple[int, int]
    pos: str | None = None

    def __post_init__(self) -> None:
        if not self.surface:
            raise ValueError("empty-surface tokens are forbidden")
        if self.char_span[0] >= self.char_span[1]:
            raise ValueError(f"invalid char_span {self.char_span}")
        if self.pos is not None and self.pos not in POS_TAGS:
            raise ValueError(f"tag {self.pos!r} outside the closed POS tag set")


@dataclass
class RawDocument:
    doc_id: str
    text: str
    title: str | None = None


@dataclass
class Sentence:
    """One sentence of a document; token spans are relative to `text`."""

    doc_id: str
    index: int
    text: str
    tokens: list[Token] = field(default_factory=list)

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def tags(self) -> list[str | None]:
        return [t.pos for t in self.tokens]


@dataclass
class Mention:
    """A pronoun or noun-phrase occurrence used during coreference."""

    sentence_index: int
    token_range: tuple[int, int]  # half-open token indices
    head_number: str  # "singular" | "plural"
    kind: str  # "pronoun" | "noun-phrase"
