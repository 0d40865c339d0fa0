"""Lexicon files, homophone lookup, and inventory extraction."""

import pytest

from accenthmm.lexicon import (
    LexiconError,
    lexicon_from_pairs,
    load_lexicon,
    merge_lexicons,
    overlay_lexicons,
)


@pytest.fixture
def small(symbols):
    return lexicon_from_pairs(
        [("red", "ɹed"), ("read", "ɹed"), ("snake", "sneɪk"), ("need", "ni:d")],
        symbols,
    )


def test_words_keep_file_order(small):
    assert small.words() == ["red", "read", "snake", "need"]


def test_form_lookup_is_case_insensitive(small):
    assert small.form("Red").ipa == "ɹed"
    assert "SNAKE" in small
    with pytest.raises(LexiconError):
        small.form("frog")


def test_homophones_include_self(small):
    assert small.homophones("red") == {"red", "read"}
    assert small.homophones("read") == {"red", "read"}
    assert small.homophones("snake") == {"snake"}


def test_inventory_in_first_appearance_order(small):
    assert [p.symbol for p in small.inventory] == ["ɹ", "e", "d", "s", "n", "eɪ", "k", "i"]


def test_duplicate_words_rejected(symbols):
    with pytest.raises(LexiconError):
        lexicon_from_pairs([("red", "ɹed"), ("RED", "red")], symbols)


def test_empty_pronunciation_rejected(symbols):
    with pytest.raises(LexiconError):
        lexicon_from_pairs([("shh", "ː")], symbols)


def test_load_lexicon_format(tmp_path, symbols):
    path = tmp_path / "words.tsv"
    path.write_text("# comment\nred\tɹed\n\nsnake\tsneɪk\n", encoding="utf-8")
    lex = load_lexicon(path, symbols)
    assert len(lex) == 2

    path.write_text("red ɹed\n", encoding="utf-8")  # no tab
    with pytest.raises(LexiconError):
        load_lexicon(path, symbols)


def test_merge_rejects_duplicates(symbols, small):
    other = lexicon_from_pairs([("red", "red")], symbols)
    with pytest.raises(LexiconError):
        merge_lexicons(small, other)


def test_overlay_keeps_first_form(symbols, small):
    other = lexicon_from_pairs([("red", "red"), ("frog", "fɹɒg")], symbols)
    combined = overlay_lexicons(small, other)
    assert combined.form("red").ipa == "ɹed"
    assert "frog" in combined
    assert len(combined) == len(small) + 1


def test_bundled_paragraph_lexicon(paragraph_lexicon):
    assert len(paragraph_lexicon) == 55
    assert "stella" in paragraph_lexicon
    # every pronunciation parses to at least one phoneme
    assert all(form.phonemes for form in paragraph_lexicon)


def test_bundled_vocabulary_includes_homophone_traps(eval_lexicon):
    assert len(eval_lexicon) > 300
    assert eval_lexicon.homophones("red") >= {"red", "read"}
