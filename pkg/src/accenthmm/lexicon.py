"""Pronunciation lexicon: words mapped to phoneme sequences.

A lexicon file is UTF-8 text, one entry per line::

    word <TAB> broad IPA transcription

``#`` starts a comment.  Each word's transcription is parsed with a
:class:`~accenthmm.phonology.SymbolTable`, so diphthongs and affricate
digraphs collapse to single phonemes.  Words with identical phoneme
sequences are homophones; recognition can't distinguish them and the
evaluation harness scores them as a class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .phonology import Phone, SymbolTable


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class WordForm:
    """One lexicon entry: the word, its raw IPA, and the parsed phonemes."""

    word: str
    ipa: str
    phonemes: tuple[Phone, ...]


class Lexicon:
    """An ordered collection of word forms with homophone lookup."""

    def __init__(self, forms):
        self.forms = list(forms)
        self._by_word = {}
        by_pron = {}
        for form in self.forms:
            key = form.word.casefold()
            if key in self._by_word:
                raise LexiconError(f"duplicate word {form.word!r}")
            self._by_word[key] = form
            by_pron.setdefault(form.phonemes, []).append(form.word)
        self._by_pron = by_pron
        inventory = []
        seen = set()
        for form in self.forms:
            for ph in form.phonemes:
                if ph not in seen:
                    seen.add(ph)
                    inventory.append(ph)
        self.inventory = tuple(inventory)

    def __len__(self):
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __contains__(self, word):
        return word.casefold() in self._by_word

    def form(self, word: str) -> WordForm:
        try:
            return self._by_word[word.casefold()]
        except KeyError:
            raise LexiconError(f"word {word!r} not in lexicon") from None

    def words(self) -> list[str]:
        return [form.word for form in self.forms]

    def homophones(self, word: str) -> frozenset[str]:
        """All words sharing this word's phoneme sequence (itself included)."""
        form = self.form(word)
        return frozenset(w.casefold() for w in self._by_pron[form.phonemes])


def lexicon_from_pairs(pairs, symbols: SymbolTable) -> Lexicon:
    """Build a lexicon from (word, ipa) pairs."""
    forms = []
    for word, ipa in pairs:
        phonemes = tuple(symbols.parse(ipa))
        if not phonemes:
            raise LexiconError(f"empty transcription for word {word!r}")
        forms.append(WordForm(word, ipa, phonemes))
    return Lexicon(forms)


def load_lexicon(path, symbols: SymbolTable) -> Lexicon:
    return lexicon_from_pairs(_read_pairs(path), symbols)


def merge_lexicons(*lexicons) -> Lexicon:
    """Combine lexicons into one; duplicate words are an error."""
    forms = []
    for lex in lexicons:
        forms.extend(lex.forms)
    return Lexicon(forms)


def overlay_lexicons(*lexicons) -> Lexicon:
    """Combine lexicons, keeping the first form seen for each word.

    Layering a base vocabulary under a larger word list keeps the base
    pronunciations for any words the two share.
    """
    forms = []
    seen = set()
    for lex in lexicons:
        for form in lex.forms:
            key = form.word.casefold()
            if key not in seen:
                seen.add(key)
                forms.append(form)
    return Lexicon(forms)


def _read_pairs(path):
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "\t" not in line:
                raise LexiconError(f"{path}:{lineno}: expected 'word<TAB>ipa'")
            word, ipa = line.split("\t", 1)
            word, ipa = word.strip(), ipa.strip()
            if not word or not ipa:
                raise LexiconError(f"{path}:{lineno}: empty field")
            pairs.append((word, ipa))
    return pairs
