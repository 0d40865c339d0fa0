"""
Word models, likelihoods, and alignments
========================================

Each lexicon word becomes a small left-to-right HMM whose states can
produce a (possibly distorted) vector, delete their phoneme, or accept
inserted material.  The forward pass scores how well an observed
pronunciation fits a word; Viterbi recovers the single best explanation.
"""

import math

from accenthmm import (
    build_word_hmm,
    forward_likelihood,
    init_naive_params,
    lexicon_from_pairs,
    load_symbols,
    recognize,
    viterbi_align,
)

symbols = load_symbols()

# a toy lexicon is enough here
lexicon = lexicon_from_pairs(
    [("red", "ɹed"), ("ten", "ten"), ("snake", "sneɪk"), ("cheese", "tʃiz")],
    symbols,
)
params = init_naive_params(lexicon.inventory)

# --- forward: how likely is a pronunciation given a word? -----------------
red = build_word_hmm(lexicon.form("red"))
for ipa in ("ɹed", "red", "ɹet", "ed"):
    obs = [p.features for p in symbols.parse(ipa)]
    score = forward_likelihood(red, obs, params)
    print(f"log P([{ipa}] | red) = {score:8.3f}")

# --- recognition: which word explains the observation best? ---------------
obs = [p.features for p in symbols.parse("sneik")]
result = recognize(obs, lexicon, params)
print(f"\n[sneik] recognized as {result.word!r} "
      f"(log likelihood {result.log_likelihood:.3f})")
for word, score in result.ranking:
    print(f"   {word:<8} {score:8.3f}")

# --- alignment: what did the speaker do to each phoneme? -------------------
# A French speaker trills the /ɹ/ in "red".  The trill differs from the
# approximant in manner alone, but by enough steps that the model prefers
# to call it a deletion of /ɹ/ followed by an inserted [r] rather than a
# substitution -- exactly how the adaptation counts will see it.
obs = [p.features for p in symbols.parse("red")]
alignment = viterbi_align(red, obs, params)
print(f"\nbest alignment of [red] to /ɹed/ "
      f"(log P = {alignment.log_probability:.3f}):")
for op in alignment.ops:
    kind = type(op).__name__
    if kind == "Produce":
        print(f"   produce /{op.phoneme.symbol}/ as {op.phone.dims()}")
    elif kind == "Delete":
        print(f"   delete  /{op.phoneme.symbol}/")
    else:
        print(f"   insert  {op.phone.dims()}")

# and the same comparison in numbers: producing [r] from /ɹ/ costs far
# more than the delete + insert pair
p = params
ɹ = symbols.parse("ɹ")[0]
r = symbols.parse("r")[0]
produce = p.p_prod(ɹ) * p.emission_at(ɹ, r.features)
del_ins = p.p_del(ɹ) * p.p_ins * (1.0 / 714.0)
print(f"\nP(produce [r] from /ɹ/) = {produce:.3e}")
print(f"P(delete /ɹ/) * P(insert [r]) = {del_ins:.3e} "
      f"({del_ins / produce:,.0f}x more likely)")
