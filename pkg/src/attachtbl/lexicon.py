"""Word-level knowledge used by attachment rules.

A lexicon file is line oriented; the first field names a section::

    POS       cup      NN
    STEM      sent     send
    SEM_NOUN  cup      artifact
    SEM_VERB  sent     possession
    SUBCAT    fly      pp-pp intrans
    PREPS     fly      from to
    PREPLIST  of to according_to ...

Repeated rows for the same key are unioned.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import FormatError

SECTIONS = ("POS", "STEM", "SEM_NOUN", "SEM_VERB", "SUBCAT", "PREPS", "PREPLIST")
_EMPTY: frozenset[str] = frozenset()

BUNDLED_LEXICON = Path(__file__).with_name("data") / "lexicon.tsv"


def _lookup(table: Mapping[str, frozenset[str]], word: str) -> frozenset[str]:
    found = table.get(word)
    if found is None:
        found = table.get(word.lower(), _EMPTY)
    return found


@dataclass(frozen=True)
class Lexicon:
    pos_of: Mapping[str, frozenset[str]] = field(default_factory=dict)
    stems_of: Mapping[str, frozenset[str]] = field(default_factory=dict)
    noun_classes_of: Mapping[str, frozenset[str]] = field(default_factory=dict)
    verb_classes_of: Mapping[str, frozenset[str]] = field(default_factory=dict)
    subcats_of: Mapping[str, frozenset[str]] = field(default_factory=dict)
    preps_licensed_by: Mapping[str, frozenset[str]] = field(default_factory=dict)
    preposition_list: frozenset[str] = _EMPTY

    # Lookups are total: unknown words give the empty set.  The exact form
    # wins; the lowercased form is tried only when the exact form is absent.

    def pos(self, word: str) -> frozenset[str]:
        return _lookup(self.pos_of, word)

    def stems(self, word: str) -> frozenset[str]:
        return _lookup(self.stems_of, word)

    def noun_classes(self, word: str) -> frozenset[str]:
        return _lookup(self.noun_classes_of, word)

    def verb_classes(self, word: str) -> frozenset[str]:
        return _lookup(self.verb_classes_of, word)

    def subcats(self, word: str) -> frozenset[str]:
        return _lookup(self.subcats_of, word)

    def licensed_preps(self, word: str) -> frozenset[str]:
        return _lookup(self.preps_licensed_by, word)

    def words_tagged(self, prefix: str) -> list[str]:
        """Sorted words having some POS tag starting with ``prefix``."""
        return sorted(w for w, tags in self.pos_of.items() if any(t.startswith(prefix) for t in tags))


def is_preposition(lex: Lexicon, igroup_head: str) -> bool:
    """True iff the word is on the preposition list; anything else counts as a subordinate conjunction."""
    if not lex.preposition_list:
        raise ValueError("preposition list is empty; cannot classify I-groups")
    return igroup_head in lex.preposition_list or igroup_head.lower() in lex.preposition_list


def parse_lexicon(lines: Iterable[str], source: str | None = None) -> Lexicon:
    tables: dict[str, dict[str, set[str]]] = {s: defaultdict(set) for s in SECTIONS if s != "PREPLIST"}
    preplist: set[str] = set()
    for lineno, line in enumerate(lines, 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        section = fields[0]
        if section not in SECTIONS:
            raise FormatError(f"unknown lexicon section {section!r}", lineno, 1, source)
        if section == "PREPLIST":
            if len(fields) < 2:
                raise FormatError("PREPLIST row lists no words", lineno, 1, source)
            preplist.update(fields[1:])
            continue
        if len(fields) < 3:
            raise FormatError(f"{section} row needs a key and at least one value", lineno, 1, source)
        tables[section][fields[1]].update(fields[2:])

    def freeze(section):
        return {k: frozenset(v) for k, v in sorted(tables[section].items())}

    return Lexicon(
        pos_of=freeze("POS"),
        stems_of=freeze("STEM"),
        noun_classes_of=freeze("SEM_NOUN"),
        verb_classes_of=freeze("SEM_VERB"),
        subcats_of=freeze("SUBCAT"),
        preps_licensed_by=freeze("PREPS"),
        preposition_list=frozenset(preplist),
    )


def load_lexicon(source: str | Path | Iterable[str] | None = None) -> Lexicon:
    """Load a lexicon from a path or an iterable of lines; None loads the bundled illustrative one."""
    if source is None:
        source = BUNDLED_LEXICON
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return parse_lexicon(fh, str(source))
    return parse_lexicon(source)
