"""Discrete IPA feature space and broad-transcription parsing.

Every phone is a point in a six-dimensional integer feature space.  The
first dimension is the vowel/consonant kind; the remaining dimensions are
articulatory scales whose ranges depend on the kind:

vowels
    d2  height      1 (close) .. 7 (open)
    d3  backness    1 back, 2 central, 3 front
    d4  rounding    0 unrounded, 1 rounded
    d5  diphthong   0 plain, 1 diphthong (same rounding), 2 (rounding differs)
    d6  nasality    0 oral, 1 nasal

consonants
    d2  place       1 glottal .. 11 bilabial
    d3  manner      1 lateral approximant, 2 approximant, 3 lateral
                    fricative, 4 fricative, 5 tap/flap, 6 trill, 7 plosive
    d4  voicing     2 voiceless, 1 voiced, 0 nasal
    d5  affricate   0 plain, 1 affricate

Nasal stops are encoded as plosives with voicing 0, so the space has
7*3*2*3*2 = 252 vowels and 11*7*3*2 = 462 consonants, 714 points total.

A symbol table maps IPA glyphs to template features (diphthong and nasal
values are contributed by the parser, not the table).  Parsing a broad
transcription ignores length, stress and other decoration, honours the
combining tilde as nasalisation, and merges closing vowel sequences into
diphthongs.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

VOWEL = "vowel"
CONSONANT = "consonant"

# Dimension ranges, inclusive, keyed by kind.  Order matters: it fixes the
# enumeration order of the space (vowels first), which everything that
# stores per-phone arrays relies on.
VOWEL_RANGES = ((1, 7), (1, 3), (0, 1), (0, 2), (0, 1))
CONSONANT_RANGES = ((1, 11), (1, 7), (0, 2), (0, 1))

# The combining tilde is the one diacritic with phonological content.
NASAL_MARK = "̃"
# Apostrophes/colons sometimes survive in source material; same treatment
# as modifier letters (dropped).
_IGNORED_CHARS = {"'", "’", ":", "ʼ"}


class PhonologyError(ValueError):
    """Raised for malformed feature values or unparseable transcriptions."""


class UnknownSymbol(PhonologyError):
    """Raised when a transcription contains a glyph the table doesn't know.

    ``symbol`` is the offending glyph and ``offset`` its byte offset within
    the UTF-8 encoding of the NFD-normalized transcription.
    """

    def __init__(self, message: str, symbol: str = "", offset: int = -1):
        super().__init__(message)
        self.symbol = symbol
        self.offset = offset


@dataclass(frozen=True, slots=True)
class PhoneFeatures:
    """A single point of the feature space.

    ``kind`` is ``"vowel"`` or ``"consonant"``.  Consonants have no sixth
    dimension; ``d6`` must stay 0 for them.
    """

    kind: str
    d2: int
    d3: int
    d4: int
    d5: int = 0
    d6: int = 0

    def __post_init__(self):
        if self.kind == VOWEL:
            ranges = VOWEL_RANGES
            values = (self.d2, self.d3, self.d4, self.d5, self.d6)
        elif self.kind == CONSONANT:
            if self.d6 != 0:
                raise PhonologyError("consonants have no nasality dimension")
            ranges = CONSONANT_RANGES
            values = (self.d2, self.d3, self.d4, self.d5)
        else:
            raise PhonologyError(f"unknown kind {self.kind!r}")
        for value, (lo, hi) in zip(values, ranges):
            if not (isinstance(value, int) and lo <= value <= hi):
                raise PhonologyError(
                    f"feature value {value!r} outside [{lo}, {hi}] for {self.kind}"
                )

    def replace(self, **kw) -> "PhoneFeatures":
        data = {
            "kind": self.kind,
            "d2": self.d2,
            "d3": self.d3,
            "d4": self.d4,
            "d5": self.d5,
            "d6": self.d6,
        }
        data.update(kw)
        return PhoneFeatures(**data)

    def dims(self) -> tuple[int, ...]:
        """The variable dimensions, without the kind indicator."""
        if self.kind == VOWEL:
            return (self.d2, self.d3, self.d4, self.d5, self.d6)
        return (self.d2, self.d3, self.d4, self.d5)


def _span(ranges):
    n = 1
    for lo, hi in ranges:
        n *= hi - lo + 1
    return n


N_VOWELS = _span(VOWEL_RANGES)
N_CONSONANTS = _span(CONSONANT_RANGES)


class FeatureSpace:
    """Enumeration of all valid feature vectors with stable indexing.

    Vowels come first, then consonants, each block in lexicographic order
    of its dimensions.  ``index``/``vector`` are inverses.
    """

    def __init__(self):
        self.size = N_VOWELS + N_CONSONANTS
        self._vectors = []
        for kind, ranges in ((VOWEL, VOWEL_RANGES), (CONSONANT, CONSONANT_RANGES)):
            self._vectors.extend(_enumerate_kind(kind, ranges))
        self._index = {v: i for i, v in enumerate(self._vectors)}

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(self._vectors)

    def __contains__(self, features):
        return features in self._index

    def index(self, features: PhoneFeatures) -> int:
        try:
            return self._index[features]
        except KeyError:
            raise PhonologyError(f"{features!r} is not in the feature space") from None

    def vector(self, i: int) -> PhoneFeatures:
        return self._vectors[i]


def _enumerate_kind(kind, ranges):
    out = [()]
    for lo, hi in ranges:
        out = [prefix + (v,) for prefix in out for v in range(lo, hi + 1)]
    dim_names = ("d2", "d3", "d4", "d5", "d6")
    for dims in out:
        yield PhoneFeatures(kind, **dict(zip(dim_names, dims)))


@dataclass(frozen=True, slots=True)
class Phone:
    """A parsed phone: display symbol plus its feature vector."""

    symbol: str
    features: PhoneFeatures


class SymbolTable:
    """IPA glyph -> feature template mapping loaded from a text table.

    File format, one row per symbol::

        # comment
        symbol  kind  d2  d3  d4  d5

    ``kind`` is V or C.  Whitespace separated, UTF-8, ``#`` starts a
    comment.  Multi-character symbols (affricate digraphs like tʃ) are
    matched longest-first during parsing.
    """

    def __init__(self, entries: dict[str, PhoneFeatures]):
        self.entries = dict(entries)
        self._max_len = max((len(s) for s in self.entries), default=1)

    @classmethod
    def load(cls, path) -> "SymbolTable":
        entries = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 6:
                    raise PhonologyError(
                        f"{path}:{lineno}: expected 6 fields, got {len(parts)}"
                    )
                symbol, kind_code, *dims = parts
                try:
                    d2, d3, d4, d5 = (int(x) for x in dims)
                except ValueError:
                    raise PhonologyError(f"{path}:{lineno}: non-integer feature") from None
                kind = {"V": VOWEL, "C": CONSONANT}.get(kind_code)
                if kind is None:
                    raise PhonologyError(f"{path}:{lineno}: kind must be V or C")
                symbol = unicodedata.normalize("NFD", symbol)
                if symbol in entries:
                    raise PhonologyError(f"{path}:{lineno}: duplicate symbol {symbol!r}")
                entries[symbol] = PhoneFeatures(kind, d2, d3, d4, d5)
        return cls(entries)

    def parse(self, text: str) -> list[Phone]:
        """Parse a broad transcription into phones (diphthongs merged)."""
        nfd = unicodedata.normalize("NFD", text)
        bases = self._tokenize(nfd)
        phones = []
        i = 0
        while i < len(bases):
            # longest match so digraph affricates win over their first char
            for length in range(min(self._max_len, len(bases) - i), 0, -1):
                chunk = bases[i : i + length]
                symbol = "".join(b for b, _, _ in chunk)
                template = self.entries.get(symbol)
                if template is not None:
                    nasal = any(flag for _, flag, _ in chunk)
                    shown = symbol + NASAL_MARK if nasal else symbol
                    phones.append(Phone(shown, _apply_nasal(template, nasal)))
                    i += length
                    break
            else:
                glyph, _, pos = bases[i]
                offset = len(nfd[:pos].encode("utf-8"))
                raise UnknownSymbol(
                    f"unknown symbol {glyph!r} at byte {offset} in transcription {text!r}",
                    symbol=glyph,
                    offset=offset,
                )
        return merge_diphthongs(phones)

    def _tokenize(self, nfd: str) -> list[tuple[str, bool, int]]:
        """Decompose to (base char, nasal flag, index) triples.

        Decoration (length/stress marks, modifier letters, non-nasal
        combining marks) is dropped; the index records each base char's
        position in the NFD string for error reporting.
        """
        out = []
        for pos, ch in enumerate(nfd):
            cat = unicodedata.category(ch)
            if cat == "Mn":
                if ch == NASAL_MARK:
                    if not out:
                        raise PhonologyError(f"dangling nasal mark in {nfd!r}")
                    base, _, p = out[-1]
                    out[-1] = (base, True, p)
                continue
            if cat in ("Lm", "Sk", "No") or ch in _IGNORED_CHARS or ch.isspace():
                continue
            out.append((ch, False, pos))
        return out


def _apply_nasal(template: PhoneFeatures, nasal: bool) -> PhoneFeatures:
    if not nasal:
        return template
    if template.kind == VOWEL:
        return template.replace(d6=1)
    # A tilde on a consonant marks nasal release/voicing; fold it into the
    # nasal voicing value.
    return template.replace(d4=0)


def merge_diphthongs(phones: list[Phone]) -> list[Phone]:
    """Merge closing vowel pairs into single diphthong phones.

    Two adjacent plain vowels merge when the second is not more open than
    the first.  The merged phone keeps the first vowel's height, backness
    and rounding; d5 becomes 1 when the two roundings agree and 2 when they
    differ; nasality is the OR of the pair.  One greedy left-to-right pass,
    merged phones don't merge again.
    """
    out = []
    i = 0
    while i < len(phones):
        cur = phones[i]
        if i + 1 < len(phones):
            nxt = phones[i + 1]
            if (
                cur.features.kind == VOWEL
                and nxt.features.kind == VOWEL
                and cur.features.d5 == 0
                and nxt.features.d5 == 0
                and nxt.features.d2 <= cur.features.d2
            ):
                d5 = 1 if cur.features.d4 == nxt.features.d4 else 2
                d6 = max(cur.features.d6, nxt.features.d6)
                merged = cur.features.replace(d5=d5, d6=d6)
                out.append(Phone(cur.symbol + nxt.symbol, merged))
                i += 2
                continue
        out.append(cur)
        i += 1
    return out
