"""
Categories and the baseline table
=================================

Every tryable I-group (two or more groups on its left, at least one on its
right) falls into one of six categories.  The bundled synthetic corpus was
generated so that its per-category statistics track a published profile.
"""

from pathlib import Path

from attachtbl import load_corpus, load_lexicon, parse_sentence
from attachtbl.evaluation import category_stats, format_stats
from attachtbl.lexicon import BUNDLED_LEXICON
from attachtbl.problems import Mode, extract_corpus, extract_problems

lex = load_lexicon()

for line in [
    "[ng I] [vg sent] [ng a cup] [ig to] [ng her]",
    "[ng I] [vg sent] [ng a cup] [ig to] [vg go]",
    "[ng I] [rg now] [ng a cup] [ig to] [ng her]",
    "[ng I] [jg big] [ng a cup] [ig to] [rg now]",
    "[ng I] [vg ran] [rg quickly] [ig to] [ng her]",
    "[ng the man] [vg saw] [ng the dog] [ig which] [vg barked]",
]:
    (p,) = extract_problems(parse_sentence(line), lex)
    print(f"{p.category.label:8} {line}")

# Candidate sets depend on the mode: every left group, or just the adjacent
# group and the nearest verb to its left.
s = parse_sentence("[ng I] [vg had sent] [ng a cup] [ig to {gold=1}] [ng her]")
for mode in Mode:
    (p,) = extract_problems(s, lex, mode)
    print(mode.value, "candidates", p.candidates, "start guess", p.guess)

corpus = Path(BUNDLED_LEXICON).with_name("profile_500.grp")
problems, skipped = extract_corpus(load_corpus(corpus), lex)
print()
print(format_stats(category_stats(problems)))
print("not tried:", dict(skipped))
