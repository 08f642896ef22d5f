"""POS tagging over a closed tag set: shipped lexicon plus suffix and
context heuristics.  Deterministic for a fixed lexicon; unknown words
tie-break to noun."""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from ..errors import ConfigurationError
from .types import POS_TAGS, Token

_NUMBER_RE = re.compile(r"[\d.,:]*\d[\d.,:]*%?")
_WORDLIKE_RE = re.compile(r"\w", re.UNICODE)

# forms of "be": an -ing word right after one is a verb, not a gerund noun
_BE_FORMS = {"is", "are", "was", "were", "be", "been", "being", "am"}

# tags after which an -ing/-ed word reads as a modifier or head noun
_NOMINAL_LEFT = {"determiner", "adjective", "preposition", "number"}


def default_lexicon_path() -> Path:
    return Path(str(resources.files("docbot.data") / "pos_lexicon.tsv"))


def default_abbreviations_path() -> Path:
    return Path(str(resources.files("docbot.data") / "abbreviations.txt"))


def load_abbreviations(path: str | Path | None = None) -> tuple[str, ...]:
    p = Path(path) if path is not None else default_abbreviations_path()
    if not p.is_file():
        raise ConfigurationError(f"abbreviation list not found: {p}")
    out = []
    for line in p.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return tuple(out)


class PosTagger:
    """Lexicon lookup with deterministic fallback rules."""

    def __init__(self, lexicon: dict[str, str]):
        for surface, tag in lexicon.items():
            if tag not in POS_TAGS:
                raise ConfigurationError(f"lexicon entry {surface!r} has unknown tag {tag!r}")
        self._lexicon = dict(lexicon)

    @classmethod
    def from_file(cls, path: str | Path | None = None) -> "PosTagger":
        p = Path(path) if path is not None else default_lexicon_path()
        if not p.is_file():
            raise ConfigurationError(f"tagger lexicon not found: {p}")
        lexicon: dict[str, str] = {}
        for n, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ConfigurationError(f"{p}:{n}: expected 'surface<TAB>tag'")
            lexicon[parts[0]] = parts[1]
        return cls(lexicon)

    def lookup(self, surface: str) -> str | None:
        tag = self._lexicon.get(surface)
        if tag is None:
            tag = self._lexicon.get(surface.lower())
        return tag

    def tag(self, tokens: list[Token]) -> list[Token]:
        """Return tokens with `pos` filled; input tokens are not mutated."""
        out: list[Token] = []
        prev_tag: str | None = None
        prev_lower = ""
        for i, tok in enumerate(tokens):
            nxt = tokens[i + 1].surface if i + 1 < len(tokens) else None
            tag = self._tag_one(tok.surface, i, prev_tag, prev_lower, nxt)
            out.append(Token(surface=tok.surface, char_span=tok.char_span, pos=tag))
            prev_tag = tag
            prev_lower = tok.surface.lower()
        return out

    def _tag_one(
        self,
        surface: str,
        position: int,
        prev_tag: str | None,
        prev_lower: str,
        next_surface: str | None,
    ) -> str:
        if not _WORDLIKE_RE.search(surface):
            return "punctuation"
        if _NUMBER_RE.fullmatch(surface):
            return "number"
        lower = surface.lower()

        if lower == "to":
            # infinitive marker before a verb, preposition otherwise
            if next_surface is not None:
                nxt = self.lookup(next_surface)
                if nxt == "verb":
                    return "infinitive-marker"
            return "preposition"
        if lower in ("this", "that", "these", "those"):
            return self._demonstrative(next_surface)

        tag = self.lookup(surface)
        if tag is not None:
            return tag
        return self._fallback(surface, lower, position, prev_tag, prev_lower)

    def _demonstrative(self, next_surface: str | None) -> str:
        # determiner when it introduces a nominal, pronoun otherwise
        if next_surface is None:
            return "pronoun"
        nxt = self.lookup(next_surface)
        if nxt in ("noun", "proper-noun", "adjective", "number"):
            return "determiner"
        if nxt is None and _WORDLIKE_RE.search(next_surface) and not next_surface[0].isupper():
            # unknown lowercase word defaults to noun, so treat as nominal
            return "determiner"
        return "pronoun"

    def _fallback(
        self, surface: str, lower: str, position: int, prev_tag: str | None, prev_lower: str
    ) -> str:
        if len(lower) > 3:
            if lower.endswith("ly"):
                return "adverb"
            if lower.endswith("ing"):
                if prev_tag in _NOMINAL_LEFT:
                    return "noun"
                if prev_lower in _BE_FORMS or prev_tag in ("pronoun", "noun", "proper-noun", "modal"):
                    return "verb"
                return "noun"
            if lower.endswith("ed"):
                if prev_tag in ("determiner", "adverb", "number"):
                    return "adjective"
                return "verb"
            if lower.endswith("s") and not lower.endswith("ss"):
                base = lower[:-1]
                base_es = lower[:-2] if lower.endswith("es") else None
                is_verb_base = self._lexicon.get(base) == "verb" or (
                    base_es is not None and self._lexicon.get(base_es) == "verb"
                )
                if is_verb_base and prev_tag in ("noun", "proper-noun", "pronoun", "number"):
                    return "verb"
        # USB, ZenBook: internal or full uppercase marks a name anywhere;
        # leading capital marks one only when not sentence-initial
        if len(surface) > 1 and any(c.isupper() for c in surface[1:]):
            return "proper-noun"
        if surface[0].isupper() and position > 0:
            return "proper-noun"
        return "noun"


def tag_pos(tokens: list[Token], model: PosTagger) -> list[Token]:
    """Fill POS for every token using the given tagger model."""
    return model.tag(tokens)
