"""Synthetic group-annotated corpora with a prescribed category profile.

The reference profile is the published category table for the held-out test
set.  Besides prevalence it gives, per category, the share of gold
attachments on the adjacent group (A) or on the adjacent group or nearest
left verb (V-A).  Err is the share no left-attachment system can reach.

:func:`allocate` turns a profile into integer counts for a corpus of a given
size; :func:`generate` writes sentences realising exactly those counts, with
words drawn from a lexicon so that learned rules have lexical signal to use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .corpus import (
    CoordinationOfGroups,
    GoldTarget,
    GroupKind,
    LeftGroup,
    RightAttachment,
    Sentence,
    SyntaxGroup,
    Token,
    Unattachable,
)
from .lexicon import Lexicon
from .problems import Category

NG, VG, JG, RG, IG = (GroupKind.NOUN, GroupKind.VERB, GroupKind.ADJECTIVE, GroupKind.ADVERB, GroupKind.IGROUP)


@dataclass(frozen=True)
class Profile:
    prevalence: float
    adjacent: float
    verb_or_adjacent: float
    unattachable: float


# Published category properties of the held-out test set, in percent.
REFERENCE_PROFILE = {
    Category.VNPN: Profile(22.8, 55.6, 97.3, 0.8),
    Category.VNPX: Profile(2.4, 44.4, 92.6, 0.0),
    Category.XNPN: Profile(30.7, 61.4, 85.1, 2.5),
    Category.XNPX: Profile(2.4, 37.7, 83.0, 3.8),
    Category.NOLEFTNOUN: Profile(28.3, 85.6, 93.6, 3.3),
    Category.SUBCONJ: Profile(13.4, 74.3, 84.2, 3.3),
}
REFERENCE_OVERALL = Profile(100.0, 67.7, 90.3, 2.4)


@dataclass(frozen=True)
class Allocation:
    """Integer counts for one category: n problems, of which adjacent/verb-or-adjacent/unattachable."""

    n: int
    adjacent: int
    verb_or_adjacent: int
    unattachable: int

    def deviation(self, profile: Profile, total: int) -> float:
        """Largest absolute gap, in percentage points, between these counts and the profile."""
        if self.n == 0:
            return 100.0
        return max(
            abs(100 * self.n / total - profile.prevalence),
            abs(100 * self.adjacent / self.n - profile.adjacent),
            abs(100 * self.verb_or_adjacent / self.n - profile.verb_or_adjacent),
            abs(100 * self.unattachable / self.n - profile.unattachable),
        )


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def _counts_for(n: int, profile: Profile) -> Allocation:
    err = _round_half_up(n * profile.unattachable / 100)
    va = min(_round_half_up(n * profile.verb_or_adjacent / 100), n - err)
    a = min(_round_half_up(n * profile.adjacent / 100), va)
    return Allocation(n, a, va, err)


def allocate(total: int = 500, profile: dict[Category, Profile] = REFERENCE_PROFILE, tolerance: float = 2.0) -> dict[Category, Allocation]:
    """Per-category counts summing to ``total`` with every cell within ``tolerance`` points.

    Among feasible choices the one closest to the profile's prevalences (least
    squares) wins; dynamic programming over the running total.
    """
    cats = list(profile)
    options: list[list[tuple[float, Allocation]]] = []
    for cat in cats:
        prof = profile[cat]
        lo = max(1, int(np.floor((prof.prevalence - tolerance) * total / 100)))
        hi = int(np.ceil((prof.prevalence + tolerance) * total / 100))
        opts = []
        for n in range(lo, hi + 1):
            alloc = _counts_for(n, prof)
            if alloc.deviation(prof, total) <= tolerance:
                opts.append(((100 * n / total - prof.prevalence) ** 2, alloc))
        if not opts:
            raise ValueError(f"no feasible size for {cat.value} at total={total}")
        options.append(opts)

    # best[s] = (cost, choices) for the categories processed so far summing to s
    best: dict[int, tuple[float, tuple[Allocation, ...]]] = {0: (0.0, ())}
    for opts in options:
        nxt: dict[int, tuple[float, tuple[Allocation, ...]]] = {}
        for s, (cost, chosen) in best.items():
            for c, alloc in opts:
                key = s + alloc.n
                if key > total:
                    continue
                cand = (cost + c, chosen + (alloc,))
                if key not in nxt or cand[0] < nxt[key][0]:
                    nxt[key] = cand
        best = nxt
    if total not in best:
        raise ValueError(f"no allocation sums to {total}")
    return dict(zip(cats, best[total][1]))


def overall(alloc: dict[Category, Allocation]) -> Allocation:
    return Allocation(
        sum(a.n for a in alloc.values()),
        sum(a.adjacent for a in alloc.values()),
        sum(a.verb_or_adjacent for a in alloc.values()),
        sum(a.unattachable for a in alloc.values()),
    )


# -- sentence construction ----------------------------------------------------------

# Preposition preferences per attachment outcome; the remainder is drawn uniformly.
NOUN_PREPS = ["of", "of", "of", "for", "with", "about", "in", "on"]
VERB_PREPS_FALLBACK = ["in", "at", "by", "during", "after", "with"]
FAR_PREPS = ["during", "after", "since", "before", "despite"]
RIGHT_PREPS = ["at", "after", "during", "in"]
MULTIWORD = [("according", "to"), ("because", "of"), ("instead", "of")]
REL_CONJ = ["which", "that", "who", "whose"]
ADV_CONJ = ["because", "when", "while", "although", "if", "where", "unless"]


class _Words:
    def __init__(self, lex: Lexicon, rng: np.random.Generator):
        self.rng = rng
        self.lex = lex
        self.nouns = [w for w in lex.words_tagged("NN") if "NN" in lex.pos(w) and lex.noun_classes(w)]
        self.names = lex.words_tagged("NNP")
        verbs = [w for w in lex.words_tagged("VBD") if lex.verb_classes(w)]
        self.verbs = verbs
        self.licensing = [v for v in verbs if lex.licensed_preps(v) & set(lex.preposition_list)]
        self.adjectives = lex.words_tagged("JJ")
        self.adverbs = lex.words_tagged("RB")
        self.subjects = ["I", "we", "they", "she", "he"]
        self.dets = ["the", "the", "its", "their", "this"]

    def pick(self, seq):
        return seq[int(self.rng.integers(len(seq)))]

    def chance(self, p: float) -> bool:
        return bool(self.rng.random() < p)

    def noun_group(self) -> SyntaxGroup:
        if self.chance(0.1):
            return SyntaxGroup.of("ng", self.pick(self.names))
        words = [self.pick(self.dets)]
        if self.chance(0.25):
            words.append(self.pick(self.adjectives))
        words.append(self.pick(self.nouns))
        return SyntaxGroup.of("ng", *words)

    def subject(self) -> SyntaxGroup:
        if self.chance(0.5):
            return SyntaxGroup.of("ng", self.pick(self.subjects))
        return self.noun_group()

    def verb_group(self, verb: str | None = None) -> SyntaxGroup:
        verb = verb or self.pick(self.verbs)
        if self.chance(0.3):
            return SyntaxGroup.of("vg", self.pick(["had", "has", "was"]), verb)
        return SyntaxGroup.of("vg", verb)

    def other_group(self, kind: GroupKind) -> SyntaxGroup:
        if kind is NG:
            return self.noun_group()
        if kind is VG:
            return self.verb_group()
        if kind is JG:
            return SyntaxGroup.of("jg", self.pick(self.adjectives))
        return SyntaxGroup.of("rg", self.pick(self.adverbs))

    def igroup(self, words: tuple[str, ...] | str) -> SyntaxGroup:
        if isinstance(words, str):
            words = (words,)
        return SyntaxGroup(IG, tuple(Token(w) for w in words))


_OUTCOMES = ("A", "V", "O", "E")


def _outcomes(alloc: Allocation) -> list[str]:
    a, va, err = alloc.adjacent, alloc.verb_or_adjacent, alloc.unattachable
    return ["A"] * a + ["V"] * (va - a) + ["O"] * (alloc.n - va - err) + ["E"] * err


def _error_gold(k: int, igroup_pos: int, coord: tuple[int, int]) -> GoldTarget:
    # Unresolvable golds split roughly evenly between right attachment and
    # coordination, with about one in six an unattachable mis-tagged item.
    if k % 6 == 5:
        return Unattachable("mistagged")
    if k % 2 == 0:
        return RightAttachment()
    return CoordinationOfGroups(frozenset(coord))


def _adjacent_preps(group: SyntaxGroup, lex: Lexicon) -> list[str]:
    if group.kind is NG:
        return NOUN_PREPS
    licensed = sorted(lex.licensed_preps(group.head) & lex.preposition_list)
    return licensed or VERB_PREPS_FALLBACK


def _build(cat: Category, outcome: str, w: _Words, err_k: int) -> tuple[list[SyntaxGroup], int, GoldTarget]:
    """One sentence as (groups, I-group position, gold)."""
    verb_word = w.pick(w.licensing) if outcome == "V" else w.pick(w.verbs)
    verb = w.verb_group(verb_word)

    # Left context.  Positions: subj=0, verb=1, then category-specific groups.
    if cat in (Category.VNPN, Category.VNPX):
        left = [w.subject(), verb, w.noun_group()]
        verb_pos, far_pos = 1, 0
    elif cat in (Category.XNPN, Category.XNPX):
        mid_kind = [NG, JG, RG][int(w.rng.integers(3))]
        left = [w.subject(), verb, w.other_group(mid_kind), w.noun_group()]
        verb_pos, far_pos = 1, 2
    elif cat is Category.NOLEFTNOUN:
        if outcome in ("V", "O"):
            adj_kind = [JG, RG][int(w.rng.integers(2))]
        else:
            adj_kind = [VG, JG, RG][int(w.rng.integers(3))]
        if adj_kind is VG:
            left = [w.subject(), verb]
            verb_pos, far_pos = 1, 0
        else:
            left = [w.subject(), verb, w.other_group(adj_kind)]
            verb_pos, far_pos = 1, 0
    else:
        adj_kind = [NG, NG, JG, RG][int(w.rng.integers(4))]
        left = [w.subject(), verb, w.other_group(adj_kind)]
        verb_pos, far_pos = 1, 0
    ig_pos = len(left)
    adj_pos = ig_pos - 1

    # The I-group word carries the lexical signal for the outcome.
    if cat is Category.SUBCONJ:
        word = w.pick(ADV_CONJ if outcome in ("V", "O") else REL_CONJ)
        ig = w.igroup(word)
    else:
        if outcome == "V":
            licensed = sorted(w.lex.licensed_preps(verb_word) & w.lex.preposition_list)
            word = w.pick(licensed) if licensed and w.chance(0.85) else w.pick(VERB_PREPS_FALLBACK)
        elif outcome == "O":
            word = w.pick(FAR_PREPS)
        elif outcome == "E":
            word = w.pick(RIGHT_PREPS)
        else:
            word = w.pick(_adjacent_preps(left[adj_pos], w.lex))
        if w.chance(0.04):
            ig = w.igroup(w.pick(MULTIWORD))
        else:
            ig = w.igroup(word)

    if cat in (Category.VNPN, Category.XNPN):
        right_kind = NG
    elif cat in (Category.VNPX, Category.XNPX):
        right_kind = [VG, JG, RG][int(w.rng.integers(3))]
    else:
        right_kind = [NG, NG, VG][int(w.rng.integers(3))]
    groups = left + [ig, w.other_group(right_kind)]
    if w.chance(0.2):
        groups.append(w.other_group(RG))

    if outcome == "A":
        gold: GoldTarget = LeftGroup(adj_pos)
    elif outcome == "V":
        gold = LeftGroup(verb_pos)
    elif outcome == "O":
        gold = LeftGroup(far_pos)
    else:
        gold = _error_gold(err_k, ig_pos, (far_pos, adj_pos))
    return groups, ig_pos, gold


def generate(
    lex: Lexicon,
    total: int = 500,
    seed: int = 7,
    profile: dict[Category, Profile] = REFERENCE_PROFILE,
    not_handled_rate: float = 0.11,
    no_right_rate: float = 0.004,
    tolerance: float = 2.0,
) -> list[Sentence]:
    """A corpus with exactly ``allocate(total, profile, tolerance)`` tried problems, one per sentence.

    Extra untryable I-groups are sprinkled in (I-group-initial sentences and
    sentence-final I-groups) at roughly the given rates of all I-groups.
    """
    rng = np.random.default_rng(seed)
    w = _Words(lex, rng)
    alloc = allocate(total, profile, tolerance)
    plan: list[tuple[Category, str, int]] = []
    for cat, a in alloc.items():
        errs = 0
        for outcome in _outcomes(a):
            plan.append((cat, outcome, errs))
            errs += outcome == "E"
    order = rng.permutation(len(plan))

    n_igroups = total / (1 - not_handled_rate - no_right_rate)
    n_initial = _round_half_up(n_igroups * not_handled_rate)
    n_final = _round_half_up(n_igroups * no_right_rate)
    initial = set(rng.choice(len(plan), size=n_initial, replace=False).tolist())
    final = set(rng.choice(len(plan), size=n_final, replace=False).tolist())

    sentences = []
    for k, idx in enumerate(order):
        cat, outcome, err_k = plan[idx]
        groups, ig_pos, gold = _build(cat, outcome, w, err_k)
        gold_map = {ig_pos: gold}
        if k in initial:
            # An opening subordinate clause marker has nothing on its left.
            groups = [w.igroup(w.pick(["after", "when", "before", "if"]))] + groups
            gold_map = {0: RightAttachment(), ig_pos + 1: _shift(gold, 1)}
        if k in final:
            last = len(groups)
            groups = groups + [w.igroup(w.pick(["of", "with", "for"]))]
            gold_map[last] = LeftGroup(last - 1)
        sentences.append(Sentence(tuple(groups), gold_map))
    return sentences


def _shift(gold: GoldTarget, by: int) -> GoldTarget:
    if isinstance(gold, LeftGroup):
        return LeftGroup(gold.position + by)
    if isinstance(gold, CoordinationOfGroups):
        return CoordinationOfGroups(frozenset(i + by for i in gold.positions))
    return gold


def profile_percentages(alloc: dict[Category, Allocation]) -> dict[Category | None, dict[str, Fraction]]:
    """The generating parameters as exact fractions, keyed like :func:`attachtbl.evaluation.category_stats`."""
    total = sum(a.n for a in alloc.values())
    out: dict[Category | None, dict[str, Fraction]] = {}
    for key, a in [*alloc.items(), (None, overall(alloc))]:
        out[key] = {
            "prev": Fraction(a.n, total),
            "A": Fraction(a.adjacent, a.n),
            "V-A": Fraction(a.verb_or_adjacent, a.n),
            "Err": Fraction(a.unattachable, a.n),
        }
    return out
