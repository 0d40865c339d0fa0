"""Accent-adaptation experiments over the 69-word elicitation paragraph.

A speaker transcript pairs each paragraph word with the speaker's
pronunciation.  The experiment splits it 35/35+34 into training and test
halves, recognizes the test half against the lexicon before and after a
single adaptation pass on the training half, and scores recognition rates
with a homophone-aware tie rule.  Group-level reporting aggregates speakers
into native (A) and foreign (B) groups with means, standard errors, and a
two-way fixed-effects ANOVA (learning x group).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from .hmm import (
    ModelParams,
    TransformCounts,
    align_and_count,
    init_naive_params,
    recognize,
    update_params,
)
from .lexicon import Lexicon, WordForm
from .phonology import NASAL_MARK, Phone, PhoneFeatures, SymbolTable, VOWEL

TRAIN_SIZE = 35
TEST_SIZE = 34
PARAGRAPH_LENGTH = TRAIN_SIZE + TEST_SIZE


class MalformedTranscript(ValueError):
    pass


class UnbalancedDesign(ValueError):
    pass


# ---------------------------------------------------------------------------
# transcripts


@dataclass(frozen=True)
class TranscriptEntry:
    """One paragraph token: the intended word and the phones heard."""

    word: str
    ipa: str
    phones: tuple[Phone, ...]

    @property
    def features(self) -> tuple[PhoneFeatures, ...]:
        return tuple(p.features for p in self.phones)


@dataclass(frozen=True)
class SpeakerTranscript:
    speaker: str
    entries: tuple[TranscriptEntry, ...]


def load_transcript(path, symbols: SymbolTable) -> SpeakerTranscript:
    """Read a transcript file: one 'word<TAB>ipa' line per paragraph token.

    The speaker id is the file name stem.  The standard paragraph has 69
    tokens; a different count raises MalformedTranscript.
    """
    path = Path(path)
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "\t" not in line:
                raise MalformedTranscript(f"{path}:{lineno}: expected 'word<TAB>ipa'")
            word, ipa = (part.strip() for part in line.split("\t", 1))
            if not word or not ipa:
                raise MalformedTranscript(f"{path}:{lineno}: empty field")
            entries.append(TranscriptEntry(word, ipa, tuple(symbols.parse(ipa))))
    if len(entries) != PARAGRAPH_LENGTH:
        raise MalformedTranscript(
            f"{path}: expected {PARAGRAPH_LENGTH} entries, found {len(entries)}"
        )
    return SpeakerTranscript(path.stem, tuple(entries))


def split_transcript(t: SpeakerTranscript, lexicon: Lexicon):
    """First 35 tokens as training pairs, last 34 as test pairs.

    Each pair is (WordForm from the lexicon, observed feature sequence).
    """
    if len(t.entries) != PARAGRAPH_LENGTH:
        raise MalformedTranscript(
            f"transcript {t.speaker!r} has {len(t.entries)} entries, "
            f"expected {PARAGRAPH_LENGTH}"
        )
    pairs = [(lexicon.form(e.word), e.features) for e in t.entries]
    return pairs[:TRAIN_SIZE], pairs[TRAIN_SIZE:]


# ---------------------------------------------------------------------------
# scoring


@dataclass(frozen=True)
class EvalItem:
    word: str
    ties: tuple[str, ...]
    correct: bool


@dataclass(frozen=True)
class EvalReport:
    speaker: str
    condition: str
    items: tuple[EvalItem, ...]

    @property
    def n_items(self) -> int:
        return len(self.items)

    @property
    def n_correct(self) -> int:
        return sum(item.correct for item in self.items)

    @property
    def rate(self) -> float:
        return 100.0 * self.n_correct / self.n_items if self.items else 0.0


def score(test_pairs, tie_sets, lexicon: Lexicon, speaker: str = "",
          condition: str = "") -> EvalReport:
    """Score one tie-set per test pair against the intended words.

    A token is correct when the tie set contains the intended word or any
    homophone of it; recognition cannot separate identical pronunciations,
    so red -> {RED, READ} counts as correct.
    """
    if len(test_pairs) != len(tie_sets):
        raise ValueError("one tie set per test pair required")
    items = []
    for (form, _), ties in zip(test_pairs, tie_sets):
        accepted = lexicon.homophones(form.word)
        correct = any(w.casefold() in accepted for w in ties)
        items.append(EvalItem(form.word, tuple(ties), correct))
    return EvalReport(speaker, condition, tuple(items))


def evaluate_speaker(t: SpeakerTranscript, lexicon: Lexicon,
                     params: ModelParams | None = None):
    """Recognition on the test half before and after one adaptation pass.

    Returns (before report, after report, training-set transform counts).
    The before condition uses the given (or naive) parameters untouched;
    adaptation Viterbi-aligns the training half and applies one batch
    update.
    """
    if params is None:
        params = init_naive_params(lexicon.inventory)
    train, test = split_transcript(t, lexicon)
    before_ties = [recognize(obs, lexicon, params).ties for _, obs in test]
    before = score(test, before_ties, lexicon, t.speaker, "before")
    counts = align_and_count(params, train)
    adapted = update_params(params, counts)
    after_ties = [recognize(obs, lexicon, adapted).ties for _, obs in test]
    after = score(test, after_ties, lexicon, t.speaker, "after")
    return before, after, counts


# ---------------------------------------------------------------------------
# transformation tables


EPSILON = "∅"


@dataclass(frozen=True)
class TransformRow:
    native: str
    foreign: str
    model: int
    reference: int
    match: bool


@dataclass(frozen=True)
class TransformationReport:
    rows: tuple[TransformRow, ...]

    @property
    def all_match(self) -> bool:
        return all(row.match for row in self.rows)

    def text(self) -> str:
        width_n = max([len("native")] + [len(r.native) for r in self.rows])
        width_f = max([len("foreign")] + [len(r.foreign) for r in self.rows])
        lines = [
            f"{'native':<{width_n}}  {'foreign':<{width_f}}  model  reference  match"
        ]
        for r in self.rows:
            lines.append(
                f"{r.native:<{width_n}}  {r.foreign:<{width_f}}  "
                f"{r.model:>5}  {r.reference:>9}  {'yes' if r.match else 'NO'}"
            )
        return "\n".join(lines)


def feature_labels(symbols: SymbolTable) -> dict[PhoneFeatures, str]:
    """Printable labels for feature vectors: base symbols, their nasalized
    variants, and the diphthongs reachable by merging two of them."""
    labels: dict[PhoneFeatures, str] = {}

    def put(features, label):
        labels.setdefault(features, label)

    base = list(symbols.entries.items())
    for symbol, features in base:
        put(features, symbol)
    singles = []
    for symbol, features in base:
        singles.append((symbol, features))
        if features.kind == VOWEL:
            nasal = features.replace(d6=1)
            put(nasal, symbol + NASAL_MARK)
            singles.append((symbol + NASAL_MARK, nasal))
        elif features.d4 != 0:
            put(features.replace(d4=0), symbol + NASAL_MARK)
    for s1, f1 in singles:
        if f1.kind != VOWEL or f1.d5 != 0:
            continue
        for s2, f2 in singles:
            if f2.kind != VOWEL or f2.d5 != 0 or f2.d2 > f1.d2:
                continue
            merged = f1.replace(
                d5=1 if f1.d4 == f2.d4 else 2, d6=f1.d6 | f2.d6
            )
            put(merged, s1 + s2)
    return labels


def _label(features: PhoneFeatures, labels) -> str:
    got = labels.get(features)
    if got is not None:
        return got
    return f"<{features.kind[0]}:{','.join(map(str, features.dims()))}>"


def model_transformations(counts: TransformCounts, labels) -> dict[tuple[str, str], int]:
    """Flatten counts into (native, foreign) -> occurrences; ∅ marks
    insertions/deletions.  Both sides use canonical vector labels so that
    alternate spellings of the same phone always land on the same row."""
    table: dict[tuple[str, str], int] = {}
    for r, phoneme in enumerate(counts.inventory):
        native = _label(phoneme.features, labels)
        if counts.n_del[r]:
            key = (native, EPSILON)
            table[key] = table.get(key, 0) + int(counts.n_del[r])
        for v in np.nonzero(counts.v_prod[r])[0]:
            key = (native, _label(counts.space.vector(int(v)), labels))
            table[key] = table.get(key, 0) + int(counts.v_prod[r, v])
    for v in np.nonzero(counts.v_ins)[0]:
        key = (EPSILON, _label(counts.space.vector(int(v)), labels))
        table[key] = table.get(key, 0) + int(counts.v_ins[v])
    return table


def transformation_table(counts: TransformCounts, labels,
                         reference: dict[tuple[str, str], int]) -> TransformationReport:
    """Side-by-side model vs. reference transformation counts.

    Rows are the reference rows plus any model rows that change something
    (identity productions absent from the reference are implicit and not
    compared).  A row matches when both counts agree (missing = 0).
    """
    model = model_transformations(counts, labels)
    keys = set(reference)
    keys.update(k for k in model if k[0] != k[1])
    rows = []
    for key in sorted(keys, key=lambda k: (k[0] == EPSILON, k[0], k[1] == EPSILON, k[1])):
        m = model.get(key, 0)
        ref = reference.get(key, 0)
        rows.append(TransformRow(key[0], key[1], m, ref, m == ref))
    return TransformationReport(tuple(rows))


def load_reference_table(path, symbols: SymbolTable, labels=None):
    """Read a reference transformation table: 'native<TAB>foreign<TAB>count'
    per line, ∅ for insertions/deletions, # comments.

    Each non-∅ side must be a single phone; it is parsed and re-labeled so
    reference rows join model rows on vectors, not on spellings.
    """
    if labels is None:
        labels = feature_labels(symbols)

    def canon(field, where):
        if field == EPSILON:
            return EPSILON
        phones = symbols.parse(field)
        if len(phones) != 1:
            raise ValueError(f"{where}: {field!r} is not a single phone")
        return _label(phones[0].features, labels)

    table: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields")
            key = (
                canon(parts[0].strip(), f"{path}:{lineno}"),
                canon(parts[1].strip(), f"{path}:{lineno}"),
            )
            table[key] = table.get(key, 0) + int(parts[2])
    return table


# ---------------------------------------------------------------------------
# groups, means, ANOVA

GROUP_NATIVE = "A"
GROUP_FOREIGN = "B"


def group_of(speaker: str) -> str:
    """Native English speakers form group A, everyone else group B."""
    return GROUP_NATIVE if speaker.casefold().startswith("english") else GROUP_FOREIGN


@dataclass(frozen=True)
class GroupStats:
    group: str
    condition: str
    n: int
    mean: float
    se: float


def standard_error(values) -> float:
    """Sample standard deviation over sqrt(n); 0 for a single value."""
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def group_report(reports, groups=None) -> list[GroupStats]:
    """Per-group, per-condition recognition-rate means and standard errors.

    ``groups`` maps speaker id to a group label; by default english* is
    group A and the rest group B.
    """
    cells: dict[tuple[str, str], list[float]] = {}
    for report in reports:
        label = groups[report.speaker] if groups else group_of(report.speaker)
        cells.setdefault((label, report.condition), []).append(report.rate)
    out = []
    for (label, condition) in sorted(cells):
        rates = cells[(label, condition)]
        out.append(GroupStats(label, condition, len(rates),
                              float(np.mean(rates)), standard_error(rates)))
    return out


@dataclass(frozen=True)
class AnovaEffect:
    name: str
    df: tuple[int, int]
    ss: float
    f: float
    p: float


@dataclass(frozen=True)
class AnovaResult:
    learning: AnovaEffect
    group: AnovaEffect
    interaction: AnovaEffect
    ss_error: float


def two_way_anova(rates) -> AnovaResult:
    """Two-factor fixed-effects ANOVA on a (group, condition, speaker) table.

    All four group x condition cells are treated as independent samples of
    equal size n (between-cells layout, df error = 4(n-1)); a 2x2x10 table
    gives the df (1, 36).  Constant effects give F = 0 exactly.
    """
    try:
        table = np.asarray(rates, dtype=float)
    except ValueError as exc:
        raise UnbalancedDesign(f"ragged rate table: {exc}") from None
    if table.ndim != 3 or table.shape[0] != 2 or table.shape[1] != 2:
        raise UnbalancedDesign(f"expected a 2x2xn table, got shape {table.shape}")
    n = table.shape[2]
    if n < 2:
        raise UnbalancedDesign("need at least 2 speakers per cell")
    grand = table.mean()
    group_means = table.mean(axis=(1, 2))
    cond_means = table.mean(axis=(0, 2))
    cell_means = table.mean(axis=2)
    ss_group = 2 * n * float(((group_means - grand) ** 2).sum())
    ss_cond = 2 * n * float(((cond_means - grand) ** 2).sum())
    ss_inter = n * float(
        ((cell_means - group_means[:, None] - cond_means[None, :] + grand) ** 2).sum()
    )
    ss_error = float(((table - cell_means[:, :, None]) ** 2).sum())
    df_effect, df_error = 1, 4 * (n - 1)

    def effect(name, ss):
        if ss == 0.0:
            return AnovaEffect(name, (df_effect, df_error), 0.0, 0.0, 1.0)
        if ss_error == 0.0:
            return AnovaEffect(name, (df_effect, df_error), ss, math.inf, 0.0)
        f = (ss / df_effect) / (ss_error / df_error)
        return AnovaEffect(name, (df_effect, df_error), ss,
                           float(f), float(stats.f.sf(f, df_effect, df_error)))

    return AnovaResult(
        learning=effect("learning", ss_cond),
        group=effect("group", ss_group),
        interaction=effect("interaction", ss_inter),
        ss_error=ss_error,
    )


def anova_table(reports, groups=None) -> np.ndarray:
    """Arrange per-speaker reports into the (group, condition, speaker)
    table two_way_anova expects; unequal group sizes are an error."""
    rates: dict[tuple[str, str], dict[str, float]] = {}
    for report in reports:
        label = groups[report.speaker] if groups else group_of(report.speaker)
        rates.setdefault((label, report.condition), {})[report.speaker] = report.rate
    cells = []
    for label in (GROUP_NATIVE, GROUP_FOREIGN):
        row = []
        for condition in ("before", "after"):
            cell = rates.get((label, condition), {})
            row.append([cell[s] for s in sorted(cell)])
        cells.append(row)
    sizes = {len(c) for row in cells for c in row}
    if len(sizes) != 1:
        raise UnbalancedDesign(
            "groups differ in size: "
            + ", ".join(str(len(c)) for row in cells for c in row)
        )
    return np.asarray(cells, dtype=float)
