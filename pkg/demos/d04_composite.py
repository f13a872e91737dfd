"""
Routing by category
===================

Different categories favour different rules.  A composite router sends each
problem to the sequence trained for its category, which can beat any single
sequence applied across the board.
"""

from attachtbl import load_lexicon, parse_sentence
from attachtbl.evaluation import CompositeRouter, composite_evaluate, evaluate
from attachtbl.problems import Category, Mode, extract_corpus
from attachtbl.tbl import apply_sequence, train

lex = load_lexicon()

# In the first shape the I-group belongs to the verb; in the second, with
# an adverb in the way, it belongs to the subject.
lines = []
for verb, obj, adv in [("sent", "a cup", "quickly"), ("gave", "the letter", "often"),
                       ("built", "the house", "again"), ("sold", "the car", "soon")]:
    lines.append(f"[ng they] [vg {verb}] [ng {obj}] [ig on {{gold=1}}] [ng Tuesday]")
    lines.append(f"[ng they] [vg {verb}] [rg {adv}] [ig on {{gold=0}}] [ng Tuesday]")
problems, _ = extract_corpus([parse_sentence(l) for l in lines], lex)

routed = {}
for cat in (Category.VNPN, Category.NOLEFTNOUN):
    routed[cat] = train([p for p in problems if p.category is cat], lex, threshold=2)
    print(cat.label, [str(r) for r in routed[cat].rules])

for cat, seq in routed.items():
    for p in problems:
        p.reset()
    acc = evaluate(apply_sequence(seq, problems, lex), problems).accuracy
    print(f"{cat.label} rules everywhere: {float(acc):.0%}")

report = composite_evaluate(CompositeRouter.fill(routed, Mode.ALL), problems, lex)
print(f"composite: {float(report.accuracy):.0%}")
