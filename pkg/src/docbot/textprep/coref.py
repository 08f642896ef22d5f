"""Nearest-antecedent pronoun resolution.

Third-person pronouns are replaced by the surface text of the nearest
preceding, number-agreeing noun phrase found in the same sentence or the
previous two.  Pronouns in subject position (directly before a verb or
modal) prefer subject noun phrases, i.e. phrases opening a sentence or a
clause; possessive pronouns substitute the antecedent plus "'s".
Sentences already substituted are visible to later pronouns, which makes
a second pass a no-op.
"""

from __future__ import annotations

from . import chunker
from .tagging import PosTagger, load_abbreviations
from .tokenizer import tokenize
from .types import Mention, Sentence

_SINGULAR = {"it", "its", "he", "him", "his", "she", "her", "this", "that"}
_PLURAL = {"they", "them", "their"}
_POSSESSIVE = {"its", "their", "his"}
_WINDOW = 2  # antecedent search reaches this many sentences back


def resolve_coreference(
    sentences: list[Sentence],
    tagger: PosTagger | None = None,
    abbreviations: tuple[str, ...] | None = None,
) -> list[Sentence]:
    """Return sentences with resolvable pronouns substituted."""
    if tagger is None:
        tagger = PosTagger.from_file()
    if abbreviations is None:
        abbreviations = load_abbreviations()
    out = [Sentence(s.doc_id, s.index, s.text, list(s.tokens)) for s in sentences]
    for si in range(len(out)):
        pi = 0
        while pi < len(out[si].tokens):
            tok = out[si].tokens[pi]
            pronoun = tok.surface.lower()
            if tok.pos != "pronoun" or (pronoun not in _SINGULAR and pronoun not in _PLURAL):
                pi += 1
                continue
            mention = _find_antecedent(out, si, pi, pronoun)
            if mention is None:
                pi += 1
                continue
            inserted = _substitute(out, si, pi, pronoun, mention, tagger, abbreviations)
            pi += inserted
    return out


def _pronoun_is_subject(sent: Sentence, pi: int) -> bool:
    for tok in sent.tokens[pi + 1 :]:
        if tok.pos == "adverb":
            continue
        return tok.pos in ("verb", "modal")
    return False


def _candidate_mentions(sent: Sentence, limit: int | None) -> list[Mention]:
    tokens = sent.tokens if limit is None else sent.tokens[:limit]
    mentions = []
    for span in chunker.noun_phrases(tokens):
        number = "plural" if chunker.head_is_plural(sent.tokens, span) else "singular"
        mentions.append(
            Mention(sentence_index=sent.index, token_range=span, head_number=number, kind="noun-phrase")
        )
    return mentions


def _is_subject_np(sent: Sentence, mention: Mention) -> bool:
    start = mention.token_range[0]
    if start == 0:
        return True
    return sent.tokens[start - 1].pos in ("punctuation", "other")


def _find_antecedent(sentences: list[Sentence], si: int, pi: int, pronoun: str) -> Mention | None:
    wanted = "plural" if pronoun in _PLURAL else "singular"
    scopes: list[tuple[Sentence, int | None]] = [(sentences[si], pi)]
    for back in range(1, _WINDOW + 1):
        if si - back >= 0:
            scopes.append((sentences[si - back], None))
    passes = (True, False) if _pronoun_is_subject(sentences[si], pi) else (False,)
    for subjects_only in passes:
        for sent, limit in scopes:
            mentions = [m for m in _candidate_mentions(sent, limit) if m.head_number == wanted]
            if subjects_only:
                mentions = [m for m in mentions if _is_subject_np(sent, m)]
            if mentions:
                return mentions[-1]  # rightmost, i.e. nearest preceding
    return None


def _mention_surface(sentences: list[Sentence], mention: Mention) -> str:
    sent = sentences[mention.sentence_index]
    lo = sent.tokens[mention.token_range[0]].char_span[0]
    hi = sent.tokens[mention.token_range[1] - 1].char_span[1]
    return sent.text.encode("utf-8")[lo:hi].decode("utf-8")


def _possessive(pronoun: str, sent: Sentence, pi: int) -> bool:
    if pronoun in _POSSESSIVE:
        return True
    if pronoun == "her" and pi + 1 < len(sent.tokens):
        return sent.tokens[pi + 1].pos in ("noun", "proper-noun", "adjective", "number")
    return False


def _substitute(
    sentences: list[Sentence],
    si: int,
    pi: int,
    pronoun: str,
    mention: Mention,
    tagger: PosTagger,
    abbreviations: tuple[str, ...],
) -> int:
    sent = sentences[si]
    repl = _mention_surface(sentences, mention)
    if _possessive(pronoun, sent, pi):
        repl += "'s"
    head_tag = sentences[mention.sentence_index].tokens[mention.token_range[0]].pos
    if pi == 0:
        repl = repl[0].upper() + repl[1:]
    elif head_tag == "determiner" and repl[0].isupper():
        repl = repl[0].lower() + repl[1:]
    text_bytes = sent.text.encode("utf-8")
    span = sent.tokens[pi].char_span
    new_text = (text_bytes[: span[0]] + repl.encode("utf-8") + text_bytes[span[1] :]).decode("utf-8")
    new_tokens = tagger.tag(tokenize(new_text, abbreviations))
    sentences[si] = Sentence(sent.doc_id, sent.index, new_text, new_tokens)
    return len(tokenize(repl, abbreviations))
