"""
From IPA strings to feature vectors
===================================

Every phone the models touch lives in a small discrete space: vowels are
(height, backness, rounded, diphthong, nasal) tuples, consonants are
(place, manner, voiced, affricate).  This script walks through parsing,
the space itself, and what the per-phoneme emission distributions look
like.
"""

import numpy as np

from accenthmm import FeatureSpace, load_symbols, phoneme_emission
from accenthmm.phonology import N_CONSONANTS, N_VOWELS

symbols = load_symbols()
space = FeatureSpace()

print(f"feature space: {len(space)} vectors "
      f"({N_VOWELS} vowels + {N_CONSONANTS} consonants)\n")

# --- parsing -------------------------------------------------------------
# parse() segments an IPA transcription by longest match and returns one
# Phone (symbol + features) per segment; stress and length marks vanish.
for text in ("sneɪk", "ˈtʃiːz", "wɛnzdɪ"):
    phones = symbols.parse(text)
    print(f"{text!r} -> {len(phones)} phones")
    for p in phones:
        print(f"   {p.symbol:>3}  {p.features.kind}{p.features.dims()}")
    print()

# The diphthong in "snake" came out of a merge: 'e' followed by 'ɪ'
# collapses into a single vowel that keeps the first vowel's quality and
# flags the glide in the diphthong slot.
e, i = symbols.parse("e")[0], symbols.parse("ɪ")[0]
eɪ = symbols.parse("eɪ")[0]
print(f"e = {e.features.dims()}, ɪ = {i.features.dims()}, "
      f"merged eɪ = {eɪ.features.dims()}")

# --- emissions -----------------------------------------------------------
# Each phoneme emits vectors of its own kind with probability falling off
# as a discretized Gaussian per dimension, so near misses stay cheap while
# anything two steps away gets rare fast.  Look at /s/: the likeliest
# foreign realizations are its immediate neighbors.
s = symbols.parse("s")[0]
emission = phoneme_emission(s.features, space)
top = np.argsort(-emission)[:8]

print(f"\nmost likely productions of /{s.symbol}/:")
for idx in top:
    features = space.vector(int(idx))
    # find a spelling for the vector if the symbol table has one
    label = next(
        (sym for sym, tmpl in symbols.entries.items() if tmpl == features),
        str(features.dims()),
    )
    print(f"   {label:>6}  {emission[idx]:.4f}")

print(f"\nrow sums to {emission.sum():.12f} over the full space")
