"""
Reading group-annotated sentences
=================================

A sentence is a row of bracketed syntax groups.  I-groups (``ig``) carry the
gold attachment in braces: the index of a group on their left, or one of
``right``, ``coord:i,j`` and ``none:REASON``.
"""

from attachtbl import parse_sentence, serialize_sentence
from attachtbl.corpus import head_word, quadruple_to_sentence, parse_quadruple

s = parse_sentence("[ng I] [vg had sent] [ng a cup] [ig to {gold=1}] [ng her]")
for i, g in enumerate(s.groups):
    print(i, g.kind.value, repr(g.text), "head:", head_word(g))
print("gold:", dict(s.gold_attachments))

# Tags ride on tokens as word/TAG; punctuation outside brackets is dropped.
tagged = parse_sentence("[ng the/DT cup/NN] , [vg broke/VBD] .")
print(tagged.groups[0].tokens)

# Serialization round-trips.
print(serialize_sentence(s))

# Quadruple data (verb noun prep noun label) becomes a four-group sentence
# with coarse tags, one problem per line.
q = quadruple_to_sentence(parse_quadruple("sold 1,000 to investors V"))
print(serialize_sentence(q))
