"""Rule-based tokenizer.

Rules, in match priority order at each position:
  1. a known abbreviation ("Mr.", "U.S.", ...) is one token, period included
  2. digit groups joined by periods or commas ("3.5", "1,000") are one token
  3. a run of word characters, allowing internal apostrophes ("don't",
     "Pro's"), is one token; Unicode word boundaries apply
  4. any other non-space character is a single-character token

Whitespace separates tokens and is never part of one, so joining token
surfaces with the original whitespace reproduces the input exactly.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .types import Token

_WORD = r"\w+(?:'\w+)*"
_NUMBER = r"\d+(?:[.,]\d+)+"


@lru_cache(maxsize=32)
def _pattern(abbreviations: tuple[str, ...]) -> re.Pattern[str]:
    parts = []
    if abbreviations:
        abbrev = sorted(abbreviations, key=len, reverse=True)
        parts.append("|".join(re.escape(a) for a in abbrev) + r"(?!\w)")
    parts.append(_NUMBER)
    parts.append(_WORD)
    parts.append(r"\S")
    return re.compile("|".join(f"(?:{p})" for p in parts), re.UNICODE)


def tokenize(text: str, abbreviations: tuple[str, ...] = ()) -> list[Token]:
    """Split text into tokens with UTF-8 byte spans; empty input yields []."""
    if not text:
        return []
    # prefix byte lengths so char offsets convert to byte offsets in O(n)
    byte_at = [0] * (len(text) + 1)
    total = 0
    for i, ch in enumerate(text):
        total += len(ch.encode("utf-8"))
        byte_at[i + 1] = total
    tokens = []
    for m in _pattern(abbreviations).finditer(text):
        tokens.append(Token(surface=m.group(0), char_span=(byte_at[m.start()], byte_at[m.end()])))
    return tokens


def surfaces(text: str, abbreviations: tuple[str, ...] = ()) -> list[str]:
    return [t.surface for t in tokenize(text, abbreviations)]
