"""Tokenizer, tagger, sentence splitter, and pipeline behaviour."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from docbot.errors import DataError
from docbot.textprep import (
    POS_TAGS,
    RawDocument,
    preprocess_document,
    resolve_coreference,
    split_sentences,
    surfaces,
    tag_pos,
    tokenize,
)


class TestTokenize:
    def test_empty_input(self):
        assert tokenize("") == []

    def test_punctuation_split(self):
        assert surfaces("Hello, world!") == ["Hello", ",", "world", "!"]

    def test_plain_words(self):
        assert surfaces("ZenBook Pro") == ["ZenBook", "Pro"]

    def test_decimal_number_single_token(self):
        assert surfaces("costs 3.5 dollars") == ["costs", "3.5", "dollars"]

    def test_abbreviation_single_token(self, abbreviations):
        assert surfaces("Mr. Smith pays.", abbreviations) == ["Mr.", "Smith", "pays", "."]

    def test_contraction_kept_whole(self):
        assert surfaces("It doesn't fold.") == ["It", "doesn't", "fold", "."]

    def test_byte_spans_non_ascii(self):
        toks = tokenize("café bar")
        raw = "café bar".encode("utf-8")
        assert [raw[t.char_span[0] : t.char_span[1]].decode("utf-8") for t in toks] == ["café", "bar"]

    @given(st.text(max_size=200))
    @settings(max_examples=200, deadline=None)
    def test_tokens_cover_all_non_whitespace(self, text):
        toks = tokenize(text)
        joined = "".join(t.surface for t in toks)
        assert sorted(joined) == sorted("".join(text.split()))

    @given(st.text(max_size=120))
    @settings(max_examples=120, deadline=None)
    def test_spans_reconstruct_text(self, text):
        raw = text.encode("utf-8")
        for t in tokenize(text):
            assert raw[t.char_span[0] : t.char_span[1]].decode("utf-8") == t.surface


class TestTagPos:
    def test_lexicon_verb(self, tagger):
        assert tag_pos(tokenize("runs"), tagger)[0].pos == "verb"

    def test_punctuation_forced(self, tagger):
        assert tag_pos(tokenize("!"), tagger)[0].pos == "punctuation"

    def test_sentence_tags(self, tagger):
        tags = [t.pos for t in tag_pos(tokenize("The display is bright"), tagger)]
        assert tags == ["determiner", "noun", "verb", "adjective"]

    def test_every_tag_in_closed_set(self, tagger):
        text = "The Falcon X1 weighs 1.4 kilograms, and it quickly charges to 80% by USB."
        for tok in tag_pos(tokenize(text), tagger):
            assert tok.pos in POS_TAGS

    def test_unknown_word_defaults_to_noun(self, tagger):
        assert tag_pos(tokenize("the brzzle"), tagger)[1].pos == "noun"

    def test_capitalized_mid_sentence_proper_noun(self, tagger):
        toks = tag_pos(tokenize("the Vortex spins"), tagger)
        assert toks[1].pos == "proper-noun"

    def test_deterministic(self, tagger):
        toks = tokenize("The quick brown fox jumps over the lazy dog.")
        a = [t.pos for t in tag_pos(toks, tagger)]
        b = [t.pos for t in tag_pos(toks, tagger)]
        assert a == b


class TestSplitSentences:
    def _split(self, text, abbreviations):
        doc = RawDocument("d", text)
        return split_sentences(doc, tokenize(text, abbreviations))

    def test_three_sentences(self, abbreviations):
        sents = self._split("A phone. A laptop? Yes!", abbreviations)
        assert [s.text for s in sents] == ["A phone.", "A laptop?", "Yes!"]

    def test_decimal_not_a_boundary(self, abbreviations):
        assert len(self._split("It costs 3.5 dollars.", abbreviations)) == 1

    def test_abbreviation_not_a_boundary(self, abbreviations):
        assert len(self._split("Dr. Smith approves. So do we.", abbreviations)) == 2

    def test_empty_document(self, abbreviations):
        assert self._split("", abbreviations) == []

    def test_indices_strictly_increasing(self, abbreviations):
        sents = self._split("One. Two. Three.", abbreviations)
        assert [s.index for s in sents] == [0, 1, 2]

    def test_trailing_text_without_terminator(self, abbreviations):
        sents = self._split("Complete. And unfinished", abbreviations)
        assert len(sents) == 2
        assert sents[1].text == "And unfinished"

    def test_token_spans_relative_to_sentence(self, abbreviations):
        sents = self._split("A phone. A laptop?", abbreviations)
        for s in sents:
            raw = s.text.encode("utf-8")
            for t in s.tokens:
                assert raw[t.char_span[0] : t.char_span[1]].decode("utf-8") == t.surface


class TestCoreference:
    def _prep(self, text, tagger, abbreviations):
        return preprocess_document(RawDocument("d", text), tagger, abbreviations)

    def test_subject_pronoun_resolved(self, tagger, abbreviations):
        sents = self._prep("The ZenBook Pro is light. It weighs 1.8 kg.", tagger, abbreviations)
        assert sents[1].text == "The ZenBook Pro weighs 1.8 kg."

    def test_no_pronoun_is_noop(self, tagger, abbreviations):
        text = "The laptop has a screen."
        assert self._prep(text, tagger, abbreviations)[0].text == text

    def test_document_initial_pronoun_unchanged(self, tagger, abbreviations):
        assert self._prep("It works.", tagger, abbreviations)[0].text == "It works."

    def test_clause_subject_preference(self, tagger, abbreviations):
        sents = self._prep(
            "The laptop has a 4K screen and it supports fast charging.", tagger, abbreviations
        )
        assert sents[0].text == "The laptop has a 4K screen and the laptop supports fast charging."

    def test_possessive_pronoun(self, tagger, abbreviations):
        sents = self._prep("The tablet is thin. Its battery lasts long.", tagger, abbreviations)
        assert sents[1].text == "The tablet's battery lasts long."

    def test_number_agreement(self, tagger, abbreviations):
        sents = self._prep("The speakers are loud. They ship separately.", tagger, abbreviations)
        assert sents[1].text == "The speakers ship separately."

    def test_idempotent(self, tagger, abbreviations):
        text = "The ZenBook Pro is light. It weighs 1.8 kg. It charges fast."
        once = self._prep(text, tagger, abbreviations)
        twice = resolve_coreference(once, tagger, abbreviations)
        assert [s.text for s in once] == [s.text for s in twice]

    def test_out_of_window_antecedent_ignored(self, tagger, abbreviations):
        text = "The phone is small. One. Two. It rings."
        sents = self._prep(text, tagger, abbreviations)
        # "The phone" sits three sentences back, beyond the 2-sentence window
        assert sents[3].text == "It rings."


class TestPreprocessDocument:
    def test_empty_text_rejected(self, tagger, abbreviations):
        with pytest.raises(DataError):
            preprocess_document(RawDocument("d", "   "), tagger, abbreviations)

    def test_two_sentences_with_pronoun(self, tagger, abbreviations):
        sents = preprocess_document(
            RawDocument("d", "The camera is new. It focuses fast."), tagger, abbreviations
        )
        assert len(sents) == 2
        assert sents[1].text == "The camera focuses fast."

    def test_without_pronouns_equals_split_only(self, tagger, abbreviations):
        text = "The camera is new. The lens focuses fast."
        doc = RawDocument("d", text)
        split_texts = [s.text for s in split_sentences(doc, tokenize(text, abbreviations))]
        prep_texts = [s.text for s in preprocess_document(doc, tagger, abbreviations)]
        assert prep_texts == split_texts

    def test_partition_covers_non_whitespace(self, tagger, abbreviations):
        text = "The camera is new. The lens focuses fast. It ships today."
        sents = preprocess_document(RawDocument("d", text), tagger, abbreviations)
        joined = "".join("".join(s.text.split()) for s in sents)
        resolved = "The camera is new. The lens focuses fast. The camera ships today."
        assert joined == "".join(resolved.split())

    def test_deterministic(self, tagger, abbreviations):
        text = "The Falcon X1 weighs 1.4 kilograms. It costs 1299 dollars."
        a = preprocess_document(RawDocument("d", text), tagger, abbreviations)
        b = preprocess_document(RawDocument("d", text), tagger, abbreviations)
        assert [s.text for s in a] == [s.text for s in b]
        assert [[t.pos for t in s.tokens] for s in a] == [[t.pos for t in s.tokens] for s in b]
