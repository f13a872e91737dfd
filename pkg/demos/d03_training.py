"""
Learning a rule sequence
========================

Training starts with every I-group attached to its neighbour and keeps adding
the rule that repairs the most errors, net of the ones it causes.  It stops
when no rule clears the threshold.
"""

from pathlib import Path

from attachtbl import load_corpus, load_lexicon
from attachtbl.evaluation import evaluate
from attachtbl.lexicon import BUNDLED_LEXICON
from attachtbl.problems import Mode, extract_corpus
from attachtbl.tbl import RuleSequence, apply_sequence, train

lex = load_lexicon()
sentences = load_corpus(Path(BUNDLED_LEXICON).with_name("profile_500.grp"))

# Even and odd sentences make a crude train/test split.
train_problems, _ = extract_corpus(sentences[::2], lex, Mode.VA)
test_problems, _ = extract_corpus(sentences[1::2], lex, Mode.VA)

seq = train(train_problems, lex, threshold=2)
for gain, rule in zip(seq.gains, seq.rules):
    print(f"{gain:3d}  {rule}")

# The text format is what the CLI reads and writes.
text = seq.dumps()
assert RuleSequence.loads(text) == seq
print(text.splitlines()[0:6])

report = evaluate(apply_sequence(seq, test_problems, lex), test_problems)
print(report.to_text())
