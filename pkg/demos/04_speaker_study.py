"""
The twenty-speaker recognition study
====================================

Runs the full desk-scale experiment on the bundled data: ten native
English speakers (group A) and nine foreign speakers (group B) each read
the same paragraph; we recognize the 34 test tokens before and after
adapting to the 35 learning tokens, then compare the groups.

(The CLI does the same thing with `accenthmm evaluate`.)
"""

from accenthmm import (
    anova_table,
    evaluate_speaker,
    evaluation_lexicon,
    group_of,
    group_report,
    init_naive_params,
    load_speaker,
    load_symbols,
    subject_names,
    two_way_anova,
)
from accenthmm.harness import UnbalancedDesign

symbols = load_symbols()
lexicon = evaluation_lexicon(symbols)
params = init_naive_params(lexicon.inventory)

print(f"lexicon: {len(lexicon)} words, {len(lexicon.inventory)} phonemes")
print(f"{'speaker':<12} {'group':<6} {'before':>7} {'after':>7} {'gain':>7}")

reports = []
for name in subject_names():
    before, after, _ = evaluate_speaker(load_speaker(name, symbols),
                                        lexicon, params)
    reports.extend([before, after])
    print(f"{name:<12} {group_of(name):<6} {before.rate:7.2f} "
          f"{after.rate:7.2f} {after.rate - before.rate:+7.2f}")

# group means with standard errors
print()
for cell in group_report(reports):
    print(f"group {cell.group} {cell.condition:<7} "
          f"{cell.mean:6.2f} +- {cell.se:.2f}  (n={cell.n})")

# The ANOVA needs equally many speakers per cell; with 10 native and 9
# foreign transcripts the design is unbalanced, so this raises unless a
# tenth group-B transcript is supplied.
try:
    result = two_way_anova(anova_table(reports))
except UnbalancedDesign as exc:
    print(f"\nANOVA skipped: {exc}")
else:
    for effect in (result.learning, result.group, result.interaction):
        print(f"{effect.name:<12} F{effect.df} = {effect.f:.2f}  p = {effect.p:.4f}")
