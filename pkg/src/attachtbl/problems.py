"""Attachment problems extracted from tryable I-groups, each with its category and an adjacent start guess."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .corpus import GoldTarget, GroupKind, LeftGroup, Sentence, Unattachable
from .lexicon import Lexicon, is_preposition


class Mode(enum.Enum):
    ALL = "all"
    VA = "v-a"


class Category(enum.Enum):
    VNPN = "vnpn"
    VNPX = "vnpx"
    XNPN = "xnpn"
    XNPX = "xnpx"
    NOLEFTNOUN = "noleftnoun"
    SUBCONJ = "subconj"

    @property
    def label(self) -> str:
        """Short display label; ``~`` marks a negated slot."""
        return _LABELS[self]


_LABELS = {
    Category.VNPN: "vnpn",
    Category.VNPX: "vnp~n",
    Category.XNPN: "~vnpn",
    Category.XNPX: "~vnp~n",
    Category.NOLEFTNOUN: "x~npx",
    Category.SUBCONJ: "xxsx",
}

# Not-handled tally keys.
NO_LEFT_AMBIGUITY = "no_left_ambiguity"
NO_RIGHT_GROUP = "no_right_group"


@dataclass(eq=False)
class AttachmentProblem:
    sentence: Sentence
    igroup_pos: int
    candidates: tuple[int, ...]
    guess: int
    gold: GoldTarget
    category: Category
    mode: Mode
    sentence_id: int = 0

    @property
    def adjacent(self) -> int:
        return self.igroup_pos - 1

    @property
    def correct(self) -> bool:
        return isinstance(self.gold, LeftGroup) and self.gold.position == self.guess

    def reset(self) -> None:
        self.guess = self.adjacent


def is_tryable(sentence: Sentence, igroup_pos: int) -> bool:
    return igroup_pos >= 2 and igroup_pos < len(sentence.groups) - 1


def nearest_left_verb(sentence: Sentence, igroup_pos: int) -> int | None:
    for i in range(igroup_pos - 1, -1, -1):
        if sentence.groups[i].kind is GroupKind.VERB:
            return i
    return None


def candidate_positions(sentence: Sentence, igroup_pos: int, mode: Mode) -> tuple[int, ...]:
    if mode is Mode.ALL:
        return tuple(range(igroup_pos))
    verb = nearest_left_verb(sentence, igroup_pos)
    return tuple(sorted({igroup_pos - 1} | ({verb} if verb is not None else set())))


def igroup_word(sentence: Sentence, igroup_pos: int, lex: Lexicon) -> str:
    """The form used for the preposition test: the joined multi-word form if listed, else the head."""
    group = sentence.groups[igroup_pos]
    if len(group.tokens) > 1 and group.joined in lex.preposition_list:
        return group.joined
    return group.head


def categorize_problem(sentence: Sentence, igroup_pos: int, lex: Lexicon) -> Category:
    if not is_tryable(sentence, igroup_pos) or sentence.groups[igroup_pos].kind is not GroupKind.IGROUP:
        raise ValueError(f"group {igroup_pos} is not a tryable I-group")
    if not is_preposition(lex, igroup_word(sentence, igroup_pos, lex)):
        return Category.SUBCONJ
    groups = sentence.groups
    if groups[igroup_pos - 1].kind is not GroupKind.NOUN:
        return Category.NOLEFTNOUN
    verb_left = groups[igroup_pos - 2].kind is GroupKind.VERB
    noun_right = groups[igroup_pos + 1].kind is GroupKind.NOUN
    if verb_left:
        return Category.VNPN if noun_right else Category.VNPX
    return Category.XNPN if noun_right else Category.XNPX


def extract_problems(
    sentence: Sentence,
    lex: Lexicon,
    mode: Mode = Mode.ALL,
    tally: Counter | None = None,
    sentence_id: int = 0,
) -> list[AttachmentProblem]:
    """One problem per tryable I-group; skipped I-groups are counted into ``tally``."""
    problems = []
    for pos in sentence.igroup_positions():
        if pos < 2:
            if tally is not None:
                tally[NO_LEFT_AMBIGUITY] += 1
            continue
        if pos >= len(sentence.groups) - 1:
            if tally is not None:
                tally[NO_RIGHT_GROUP] += 1
            continue
        gold = sentence.gold_attachments.get(pos, Unattachable("unannotated"))
        problems.append(
            AttachmentProblem(
                sentence=sentence,
                igroup_pos=pos,
                candidates=candidate_positions(sentence, pos, mode),
                guess=pos - 1,
                gold=gold,
                category=categorize_problem(sentence, pos, lex),
                mode=mode,
                sentence_id=sentence_id,
            )
        )
    return problems


def extract_corpus(
    sentences: Iterable[Sentence], lex: Lexicon, mode: Mode = Mode.ALL
) -> tuple[list[AttachmentProblem], Counter]:
    tally: Counter = Counter()
    problems = []
    for sid, s in enumerate(sentences):
        problems.extend(extract_problems(s, lex, mode, tally, sid))
    return problems, tally


def is_resolvable(problem: AttachmentProblem) -> bool:
    gold = problem.gold
    return isinstance(gold, LeftGroup) and gold.position in problem.candidates


def reset_guesses(problems: Iterable[AttachmentProblem]) -> None:
    for p in problems:
        p.reset()
