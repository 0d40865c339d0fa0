"""Per-word HMMs over the IPA feature space: recognition and adaptation.

Each word w with phonemes p_1..p_n gets a left-to-right model R(w) with
states S_1..S_{n+2}:

- every state S_1..S_{n+1} carries a self-loop that inserts a spurious
  phone with probability P(ins), emitting v ~ P(v|ins);
- S_i -> S_{i+1} (i <= n) either *produces* p_i with probability
  P(prod|p_i), emitting v ~ P(v|p_i), or *deletes* it with P(del|p_i);
- S_{n+1} -> S_{n+2} exits with the leftover probability 1 - P(ins).

P(del|p) = (1-P(ins)) * P(del|p, not ins) and P(prod|p) picks up the rest,
so each state's outgoing mass is exactly 1.

Emission distributions are products of per-dimension discretized Gaussians
(sigma = 2/3) normalized over each dimension's integer range, gated by a
hard vowel/consonant indicator: a phoneme of one kind gives probability 0
to every vector of the other kind.

Recognition scores an observed phone sequence against every lexicon word
with the forward algorithm (log domain) under a uniform word prior.
Adaptation Viterbi-aligns (word, pronunciation) pairs, tallies
produce/delete/insert statistics, and applies one batch Laplace-style
update with prior weight C.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .lexicon import Lexicon, WordForm
from .phonology import (
    CONSONANT,
    CONSONANT_RANGES,
    FeatureSpace,
    N_VOWELS,
    Phone,
    PhoneFeatures,
    VOWEL,
    VOWEL_RANGES,
)

SIGMA = 2.0 / 3.0
P_INS = 0.01
P_DEL = 0.01
PRIOR_WEIGHT = 20.0

LOG_ZERO = float("-inf")


class EmptyLexicon(ValueError):
    pass


class EmptyWord(ValueError):
    pass


# ---------------------------------------------------------------------------
# word models


@dataclass(frozen=True)
class WordHmm:
    """R(w): the word's phoneme sequence; states are implicit in the DP."""

    word: str
    phonemes: tuple[Phone, ...]

    @property
    def n_states(self) -> int:
        # S_1..S_{n+2}
        return len(self.phonemes) + 2


def build_word_hmm(form: WordForm) -> WordHmm:
    if not form.phonemes:
        raise EmptyWord(f"word {form.word!r} has no phonemes")
    return WordHmm(form.word, tuple(form.phonemes))


# ---------------------------------------------------------------------------
# parameters


class ModelParams:
    """Shared free parameters: insertion, per-phoneme deletion, emissions.

    Treat instances as immutable; ``update_params`` returns a new object.
    ``emit`` rows and ``emit_ins`` are dense over the feature space in its
    enumeration order.
    """

    def __init__(self, space, inventory, p_ins, emit_ins, del_bar, emit,
                 sigma=SIGMA, prior_weight=PRIOR_WEIGHT):
        self.space = space
        self.inventory = tuple(inventory)
        self.p_ins = float(p_ins)
        self.emit_ins = np.asarray(emit_ins, dtype=float)
        self.del_bar = np.asarray(del_bar, dtype=float)
        self.emit = np.asarray(emit, dtype=float)
        self.sigma = float(sigma)
        self.prior_weight = float(prior_weight)
        self._row = {ph: i for i, ph in enumerate(self.inventory)}
        if self.emit.shape != (len(self.inventory), len(space)):
            raise ValueError("emission table shape mismatch")
        if self.emit_ins.shape != (len(space),):
            raise ValueError("insertion emission shape mismatch")
        if self.del_bar.shape != (len(self.inventory),):
            raise ValueError("deletion table shape mismatch")
        self._logs = None

    def row(self, phoneme: Phone) -> int:
        try:
            return self._row[phoneme]
        except KeyError:
            raise KeyError(f"phoneme {phoneme.symbol!r} not in parameter inventory") from None

    def p_del_bar(self, phoneme: Phone) -> float:
        return float(self.del_bar[self.row(phoneme)])

    def p_del(self, phoneme: Phone) -> float:
        return (1.0 - self.p_ins) * self.p_del_bar(phoneme)

    def p_prod(self, phoneme: Phone) -> float:
        # written so that p_ins + p_del + p_prod sums to exactly 1.0
        return 1.0 - (self.p_ins + self.p_del(phoneme))

    def emission(self, phoneme: Phone) -> np.ndarray:
        return self.emit[self.row(phoneme)]

    def emission_at(self, phoneme: Phone, features: PhoneFeatures) -> float:
        return float(self.emit[self.row(phoneme), self.space.index(features)])

    # cached log-domain views used by the DP routines
    def _log_tables(self):
        if self._logs is None:
            with np.errstate(divide="ignore"):
                log_emit = np.log(self.emit)
                log_emit_ins = np.log(self.emit_ins)
                p_del = (1.0 - self.p_ins) * self.del_bar
                p_prod = 1.0 - (self.p_ins + p_del)
                log_del = np.log(p_del)
                log_prod = np.log(p_prod)
                log_ins = math.log(self.p_ins) if self.p_ins > 0 else LOG_ZERO
                log_term = math.log1p(-self.p_ins) if self.p_ins < 1 else LOG_ZERO
            self._logs = (log_emit, log_emit_ins, log_del, log_prod, log_ins, log_term)
        return self._logs


def _dim_factors(mu, lo, hi, sigma):
    """Normalized discretized Gaussian over lo..hi centered at mu."""
    d = np.arange(lo, hi + 1, dtype=float)
    f = np.exp(-((d - mu) ** 2) / (2.0 * sigma * sigma))
    return f / f.sum()


def phoneme_emission(features: PhoneFeatures, space: FeatureSpace,
                     sigma: float = SIGMA) -> np.ndarray:
    """Initial emission distribution P(v|p) for one phoneme template.

    Product of per-dimension factors over the phoneme's own kind block;
    vectors of the other kind get exactly 0 (vowels and consonants cannot
    swap).  The block is assembled with outer products in the space's
    lexicographic enumeration order.
    """
    if features.kind == VOWEL:
        ranges = VOWEL_RANGES
        mus = (features.d2, features.d3, features.d4, features.d5, features.d6)
    else:
        ranges = CONSONANT_RANGES
        mus = (features.d2, features.d3, features.d4, features.d5)
    block = np.ones(1)
    for mu, (lo, hi) in zip(mus, ranges):
        block = np.outer(block, _dim_factors(mu, lo, hi, sigma)).ravel()
    row = np.zeros(len(space))
    if features.kind == VOWEL:
        row[:N_VOWELS] = block
    else:
        row[N_VOWELS:] = block
    return row


def init_naive_params(inventory, space: FeatureSpace | None = None,
                      p_ins: float = P_INS, p_del: float = P_DEL,
                      sigma: float = SIGMA,
                      prior_weight: float = PRIOR_WEIGHT) -> ModelParams:
    """Parameters for naive recognition: flat insertions/deletions plus
    bell-shaped emissions around each phoneme's own feature vector."""
    inventory = tuple(inventory)
    if not inventory:
        raise ValueError("empty phoneme inventory")
    if space is None:
        space = FeatureSpace()
    emit_ins = np.full(len(space), 1.0 / len(space))
    del_bar = np.full(len(inventory), p_del, dtype=float)
    emit = np.empty((len(inventory), len(space)))
    done = {}
    for i, ph in enumerate(inventory):
        key = ph.features
        if key not in done:
            done[key] = phoneme_emission(key, space, sigma)
        emit[i] = done[key]
    return ModelParams(space, inventory, p_ins, emit_ins, del_bar, emit,
                       sigma, prior_weight)


# ---------------------------------------------------------------------------
# forward likelihood and recognition


def forward_likelihood(hmm: WordHmm, obs, params: ModelParams) -> float:
    """log P(obs, exit | R(w)): total probability over all lattice paths."""
    log_emit, log_emit_ins, log_del, log_prod, log_ins, log_term = params._log_tables()
    rows = [params.row(ph) for ph in hmm.phonemes]
    vidx = [params.space.index(f) for f in obs]
    n = len(rows)
    # alpha[i] = log P(v_1..v_k, S_{i+1}); i = phonemes consumed so far
    alpha = np.empty(n + 1)
    alpha[0] = 0.0
    for i in range(1, n + 1):
        alpha[i] = alpha[i - 1] + log_del[rows[i - 1]]
    for v in vidx:
        new = np.empty(n + 1)
        new[0] = alpha[0] + log_ins + log_emit_ins[v]
        for i in range(1, n + 1):
            r = rows[i - 1]
            produce = alpha[i - 1] + log_prod[r] + log_emit[r, v]
            insert = alpha[i] + log_ins + log_emit_ins[v]
            delete = new[i - 1] + log_del[r]
            new[i] = np.logaddexp(np.logaddexp(produce, insert), delete)
        alpha = new
    return float(alpha[n] + log_term)


@dataclass(frozen=True)
class RecognitionResult:
    """Ranked recognition outcome; ``ties`` holds every word whose score is
    within the tie tolerance of the best (homophones tie exactly)."""

    ranking: tuple[tuple[str, float], ...]
    ties: tuple[str, ...]

    @property
    def word(self) -> str:
        return self.ranking[0][0]

    @property
    def log_likelihood(self) -> float:
        return self.ranking[0][1]


TIE_TOLERANCE = 1e-9


def recognize(obs, lexicon: Lexicon, params: ModelParams,
              tie_tolerance: float = TIE_TOLERANCE) -> RecognitionResult:
    """Find the lexicon words best explaining obs (uniform word prior)."""
    if len(lexicon) == 0:
        raise EmptyLexicon("cannot recognize against an empty lexicon")
    scores = batch_forward(obs, lexicon.forms, params)
    order = np.argsort(-scores, kind="stable")
    ranking = tuple((lexicon.forms[i].word, float(scores[i])) for i in order)
    best = ranking[0][1]
    ties = tuple(w for w, s in ranking if s >= best - tie_tolerance)
    return RecognitionResult(ranking, ties)


def batch_forward(obs, forms, params: ModelParams) -> np.ndarray:
    """forward_likelihood for many words at once (one DP, padded arrays)."""
    log_emit, log_emit_ins, log_del, log_prod, log_ins, log_term = params._log_tables()
    vidx = [params.space.index(f) for f in obs]
    W = len(forms)
    lengths = np.array([len(f.phonemes) for f in forms])
    nmax = int(lengths.max())
    rows = np.zeros((W, nmax), dtype=int)
    mask = np.zeros((W, nmax), dtype=bool)
    for w, form in enumerate(forms):
        for i, ph in enumerate(form.phonemes):
            rows[w, i] = params.row(ph)
            mask[w, i] = True
    ld = np.where(mask, log_del[rows], LOG_ZERO)
    lp = np.where(mask, log_prod[rows], LOG_ZERO)
    alpha = np.empty((W, nmax + 1))
    alpha[:, 0] = 0.0
    for i in range(1, nmax + 1):
        alpha[:, i] = alpha[:, i - 1] + ld[:, i - 1]
    for v in vidx:
        emis = np.where(mask, log_emit[rows, v], LOG_ZERO)
        new = np.empty_like(alpha)
        new[:, 0] = alpha[:, 0] + log_ins + log_emit_ins[v]
        for i in range(1, nmax + 1):
            produce = alpha[:, i - 1] + lp[:, i - 1] + emis[:, i - 1]
            insert = alpha[:, i] + log_ins + log_emit_ins[v]
            delete = new[:, i - 1] + ld[:, i - 1]
            new[:, i] = np.logaddexp(np.logaddexp(produce, insert), delete)
        alpha = new
    return alpha[np.arange(W), lengths] + log_term


# ---------------------------------------------------------------------------
# Viterbi alignment


@dataclass(frozen=True)
class Produce:
    phoneme: Phone
    phone: PhoneFeatures


@dataclass(frozen=True)
class Delete:
    phoneme: Phone


@dataclass(frozen=True)
class Insert:
    phone: PhoneFeatures


@dataclass(frozen=True)
class Alignment:
    word: str
    ops: tuple
    log_probability: float


_PROD, _DEL, _INS = 0, 1, 2


def viterbi_align(hmm: WordHmm, obs, params: ModelParams) -> Alignment:
    """Most probable op sequence turning the word into obs.

    Ties between equal-weight predecessors prefer Produce, then Delete,
    then Insert, applied at every lattice step during backtracing.
    """
    log_emit, log_emit_ins, log_del, log_prod, log_ins, log_term = params._log_tables()
    rows = [params.row(ph) for ph in hmm.phonemes]
    vidx = [params.space.index(f) for f in obs]
    n, m = len(rows), len(vidx)
    score = np.full((m + 1, n + 1), LOG_ZERO)
    back = np.full((m + 1, n + 1), -1, dtype=np.int8)
    score[0, 0] = 0.0
    for i in range(1, n + 1):
        score[0, i] = score[0, i - 1] + log_del[rows[i - 1]]
        back[0, i] = _DEL
    for k in range(1, m + 1):
        v = vidx[k - 1]
        score[k, 0] = score[k - 1, 0] + log_ins + log_emit_ins[v]
        back[k, 0] = _INS
        for i in range(1, n + 1):
            r = rows[i - 1]
            produce = score[k - 1, i - 1] + log_prod[r] + log_emit[r, v]
            delete = score[k, i - 1] + log_del[r]
            insert = score[k - 1, i] + log_ins + log_emit_ins[v]
            if produce >= delete and produce >= insert:
                score[k, i], back[k, i] = produce, _PROD
            elif delete >= insert:
                score[k, i], back[k, i] = delete, _DEL
            else:
                score[k, i], back[k, i] = insert, _INS
    ops = []
    k, i = m, n
    while k > 0 or i > 0:
        op = back[k, i]
        if op == _PROD:
            ops.append(Produce(hmm.phonemes[i - 1], obs[k - 1]))
            k, i = k - 1, i - 1
        elif op == _DEL:
            ops.append(Delete(hmm.phonemes[i - 1]))
            i -= 1
        else:
            ops.append(Insert(obs[k - 1]))
            k -= 1
    ops.reverse()
    return Alignment(hmm.word, tuple(ops), float(score[m, n] + log_term))


# ---------------------------------------------------------------------------
# adaptation


class TransformCounts:
    """Produce/delete/insert tallies from a batch of alignments."""

    def __init__(self, inventory, space: FeatureSpace):
        self.inventory = tuple(inventory)
        self.space = space
        self._row = {ph: i for i, ph in enumerate(self.inventory)}
        self.n_ins = 0
        self.n_del = np.zeros(len(self.inventory), dtype=int)
        self.n_prod = np.zeros(len(self.inventory), dtype=int)
        self.v_ins = np.zeros(len(space), dtype=int)
        self.v_prod = np.zeros((len(self.inventory), len(space)), dtype=int)

    @property
    def n_not_ins(self) -> int:
        return int(self.n_del.sum() + self.n_prod.sum())

    def add_alignment(self, alignment: Alignment):
        for op in alignment.ops:
            if isinstance(op, Produce):
                r = self._row[op.phoneme]
                self.n_prod[r] += 1
                self.v_prod[r, self.space.index(op.phone)] += 1
            elif isinstance(op, Delete):
                self.n_del[self._row[op.phoneme]] += 1
            else:
                self.n_ins += 1
                self.v_ins[self.space.index(op.phone)] += 1

    def produced(self, phoneme: Phone, features: PhoneFeatures) -> int:
        return int(self.v_prod[self._row[phoneme], self.space.index(features)])

    def deleted(self, phoneme: Phone) -> int:
        return int(self.n_del[self._row[phoneme]])

    def inserted(self, features: PhoneFeatures) -> int:
        return int(self.v_ins[self.space.index(features)])


def accumulate_counts(alignments, inventory, space: FeatureSpace) -> TransformCounts:
    counts = TransformCounts(inventory, space)
    for alignment in alignments:
        counts.add_alignment(alignment)
    return counts


def update_params(params: ModelParams, counts: TransformCounts) -> ModelParams:
    """One batch update blending counts with the priors at weight C.

    Cells with zero observations keep their prior value verbatim: the
    formula reduces to (0 + C*x)/(0 + C) = x, and evaluating it literally
    can cost the last ulp, which the identity case must not.
    """
    C = params.prior_weight
    n_ins = int(counts.n_ins)
    n_not = counts.n_not_ins
    if n_ins == 0 and n_not == 0:
        p_ins = params.p_ins
    else:
        p_ins = (n_ins + C * params.p_ins) / (n_ins + n_not + C)

    totals = counts.n_del + counts.n_prod
    del_bar = np.where(
        totals == 0,
        params.del_bar,
        (counts.n_del + C * params.del_bar) / np.where(totals == 0, 1, totals + C),
    )

    if n_ins == 0:
        emit_ins = params.emit_ins.copy()
    else:
        emit_ins = (counts.v_ins + C * params.emit_ins) / (C + n_ins)

    emit = params.emit.copy()
    hot = np.nonzero(counts.n_prod > 0)[0]
    for r in hot:
        emit[r] = (counts.v_prod[r] + C * params.emit[r]) / (C + counts.n_prod[r])

    return ModelParams(params.space, params.inventory, p_ins, emit_ins,
                       del_bar, emit, params.sigma, params.prior_weight)


def adapt(params: ModelParams, training_pairs) -> ModelParams:
    """Viterbi-align every (WordForm, obs) pair under the input params,
    tally the ops, and apply one batch update."""
    counts = align_and_count(params, training_pairs)
    return update_params(params, counts)


def align_and_count(params: ModelParams, training_pairs) -> TransformCounts:
    counts = TransformCounts(params.inventory, params.space)
    for form, obs in training_pairs:
        alignment = viterbi_align(build_word_hmm(form), obs, params)
        counts.add_alignment(alignment)
    return counts


# ---------------------------------------------------------------------------
# serialization

_FORMAT = "accenthmm-params-v1"


def params_to_dict(params: ModelParams) -> dict:
    return {
        "format": _FORMAT,
        "p_ins": params.p_ins,
        "sigma": params.sigma,
        "prior_weight": params.prior_weight,
        "inventory": [
            {
                "symbol": ph.symbol,
                "kind": ph.features.kind,
                "d2": ph.features.d2,
                "d3": ph.features.d3,
                "d4": ph.features.d4,
                "d5": ph.features.d5,
                "d6": ph.features.d6,
            }
            for ph in params.inventory
        ],
        "del_bar": params.del_bar.tolist(),
        "emit_ins": params.emit_ins.tolist(),
        "emit": params.emit.tolist(),
    }


def params_from_dict(data: dict, space: FeatureSpace | None = None) -> ModelParams:
    if data.get("format") != _FORMAT:
        raise ValueError(f"unrecognized parameter snapshot format: {data.get('format')!r}")
    if space is None:
        space = FeatureSpace()
    inventory = tuple(
        Phone(
            e["symbol"],
            PhoneFeatures(e["kind"], e["d2"], e["d3"], e["d4"], e["d5"], e["d6"]),
        )
        for e in data["inventory"]
    )
    return ModelParams(
        space,
        inventory,
        data["p_ins"],
        np.array(data["emit_ins"], dtype=float),
        np.array(data["del_bar"], dtype=float),
        np.array(data["emit"], dtype=float),
        data["sigma"],
        data["prior_weight"],
    )


def save_params(params: ModelParams, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(params_to_dict(params), fh)
        fh.write("\n")


def load_params(path, space: FeatureSpace | None = None) -> ModelParams:
    with open(path, encoding="utf-8") as fh:
        return params_from_dict(json.load(fh), space)
