"""
Learning a speaker's accent from 35 words
=========================================

The bundled transcripts each read the same 69-token paragraph.  The first
35 tokens are the learning set: Viterbi-align each one to its intended
word, tally what the speaker systematically does (z for s, d for the th
sounds, a trilled r, ...), then fold the tallies into the emission and
deletion tables.  One pass is enough to flip many misrecognized tokens.
"""

from accenthmm import (
    align_and_count,
    evaluation_lexicon,
    feature_labels,
    init_naive_params,
    load_reference_transformations,
    load_speaker,
    load_symbols,
    recognize,
    split_transcript,
    transformation_table,
    update_params,
)

symbols = load_symbols()
lexicon = evaluation_lexicon(symbols)
speaker = load_speaker("french8", symbols)
train, test = split_transcript(speaker, lexicon)
print(f"speaker {speaker.speaker}: {len(train)} learning tokens, "
      f"{len(test)} test tokens")

# --- what does this speaker do? -------------------------------------------
naive = init_naive_params(lexicon.inventory)
counts = align_and_count(naive, train)
report = transformation_table(
    counts, feature_labels(symbols), load_reference_transformations(symbols)
)
print("\ntransformations on the learning set (model vs. published counts):")
print(report.text())

# --- fold the counts into the parameters ----------------------------------
adapted = update_params(naive, counts)
ð = symbols.parse("ð")[0]
d = symbols.parse("d")[0]
print(f"P([d] | /ð/) before: {naive.emission_at(ð, d.features):.2e}, "
      f"after: {adapted.emission_at(ð, d.features):.4f}")

# --- the payoff: before/after recognition on unseen tokens ----------------
print("\ntest tokens that change verdict after one update:")
for form, obs in test:
    before = recognize(obs, lexicon, naive)
    after = recognize(obs, lexicon, adapted)
    if set(before.ties) != set(after.ties):
        print(f"   {form.word:<10} {'|'.join(before.ties):<12} "
              f"-> {'|'.join(after.ties)}")

correct_before = sum(
    bool(lexicon.homophones(form.word) & {w.casefold() for w in
                                          recognize(obs, lexicon, naive).ties})
    for form, obs in test
)
correct_after = sum(
    bool(lexicon.homophones(form.word) & {w.casefold() for w in
                                          recognize(obs, lexicon, adapted).ties})
    for form, obs in test
)
n = len(test)
print(f"\ntest-set recognition: {correct_before}/{n} "
      f"({100 * correct_before / n:.2f}%) before, "
      f"{correct_after}/{n} ({100 * correct_after / n:.2f}%) after")
