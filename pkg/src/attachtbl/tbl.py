"""Transformation-based error-driven learning of attachment rules.

A rule is a condition (one probe, or an I-group probe paired with a probe at
another site) plus a move.  Moves scan the problem's candidate groups left or
right of the current guess and land on the nearest one meeting an optional
constraint.  Training starts from the adjacent guess and greedily appends the
rule with the best net repair count until that count drops below a threshold.

Rule files are plain text, one rule per line::

    # attachtbl rules
    # mode: v-a
    # threshold: 2
    4	(and (IGROUP word "to") (CURRENT_GUESS nclass "artifact"))	(LEFT kind "vg")

Probe grammar: ``(SITE TEST "value")``, or ``(SITE licenses)`` which asks
whether the site's head word licenses the I-group's preposition.  An action
is a bare direction such as ``(LEFT)``, or ``(DIR TEST "value")`` where TEST
is ``kind``, ``nclass`` or ``vclass``.
"""

from __future__ import annotations

import enum
import hashlib
import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .corpus import GroupKind, LeftGroup, serialize_sentence
from .lexicon import Lexicon
from .problems import AttachmentProblem, Mode, nearest_left_verb

FORMAT_VERSION = 1
TEMPLATE_VERSION = "v1"


class Site(enum.Enum):
    IGROUP = "IGROUP"
    RIGHT_NEIGHBOR = "RIGHT_NEIGHBOR"
    CURRENT_GUESS = "CURRENT_GUESS"
    ADJACENT_LEFT = "ADJACENT_LEFT"
    NEAREST_LEFT_VERB = "NEAREST_LEFT_VERB"


class Test(enum.Enum):
    WORD = "word"
    STEM = "stem"
    POS = "pos"
    NOUNCLASS = "nclass"
    VERBCLASS = "vclass"
    SUBCAT = "subcat"
    LICENSES = "licenses"
    KIND = "kind"


class Direction(enum.Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"


@dataclass(frozen=True)
class Probe:
    site: Site
    test: Test
    value: str = ""

    def text(self) -> str:
        if self.test is Test.LICENSES:
            return f"({self.site.value} licenses)"
        return f"({self.site.value} {self.test.value} {_quote(self.value)})"


@dataclass(frozen=True)
class Move:
    direction: Direction
    test: Test | None = None
    value: str = ""

    def text(self) -> str:
        if self.test is None:
            return f"({self.direction.value})"
        return f"({self.direction.value} {self.test.value} {_quote(self.value)})"


@dataclass(frozen=True)
class Rule:
    condition: tuple[Probe, ...]
    action: Move

    def __post_init__(self):
        object.__setattr__(self, "condition", tuple(self.condition))
        if not 1 <= len(self.condition) <= 2:
            raise ValueError("a rule condition has one or two probes")
        if len(self.condition) == 2:
            a, b = self.condition
            if (a.site, a.test) == (b.site, b.test):
                raise ValueError("conjoined probes must differ in site or test")

    def text(self) -> str:
        if len(self.condition) == 1:
            cond = self.condition[0].text()
        else:
            cond = "(and " + " ".join(p.text() for p in self.condition) + ")"
        return f"{cond}\t{self.action.text()}"

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class Templates:
    """The declared rule-template inventory."""

    version: str = TEMPLATE_VERSION
    sites: tuple[Site, ...] = tuple(Site)
    tests: tuple[Test, ...] = tuple(Test)
    pair_with_igroup: bool = True
    move_kinds: tuple[str, ...] = (GroupKind.VERB.value, GroupKind.NOUN.value)
    move_tests: tuple[Test, ...] = (Test.NOUNCLASS, Test.VERBCLASS)


DEFAULT_TEMPLATES = Templates()


def _quote(value: str) -> str:
    return json.dumps(value, ensure_ascii=False)


# -- features --------------------------------------------------------------

Feature = tuple  # (Test, value)


def group_features(problem: AttachmentProblem, index: int, lex: Lexicon) -> frozenset:
    """All (test, value) pairs that hold for group ``index`` in the problem's sentence."""
    sentence = problem.sentence
    group = sentence.groups[index]
    head = group.head
    feats = {(Test.WORD, head), (Test.KIND, group.kind.value)}
    if len(group.tokens) > 1 and group.kind is GroupKind.IGROUP:
        feats.add((Test.WORD, group.joined))
    head_token = group.tokens[group.head_index]
    tags = {head_token.pos} if head_token.tagged else lex.pos(head)
    feats.update((Test.POS, t) for t in tags)
    feats.update((Test.STEM, s) for s in lex.stems(head))
    feats.update((Test.NOUNCLASS, c) for c in lex.noun_classes(head))
    feats.update((Test.VERBCLASS, c) for c in lex.verb_classes(head))
    feats.update((Test.SUBCAT, f) for f in lex.subcats(head))
    if index != problem.igroup_pos:
        ig = sentence.groups[problem.igroup_pos]
        licensed = lex.licensed_preps(head)
        if ig.head in licensed or ig.joined in licensed:
            feats.add((Test.LICENSES, ""))
    return frozenset(feats)


class _Context:
    """Cached per-problem features; the current guess is read live from the problem."""

    __slots__ = ("problem", "feats", "fixed_sites")

    def __init__(self, problem: AttachmentProblem, lex: Lexicon):
        self.problem = problem
        p = problem
        self.fixed_sites = {
            Site.IGROUP: p.igroup_pos,
            Site.RIGHT_NEIGHBOR: p.igroup_pos + 1,
            Site.ADJACENT_LEFT: p.igroup_pos - 1,
            Site.NEAREST_LEFT_VERB: nearest_left_verb(p.sentence, p.igroup_pos),
        }
        needed = set(p.candidates) | {p.igroup_pos, p.igroup_pos + 1}
        self.feats = {i: group_features(p, i, lex) for i in needed}

    def site(self, site: Site) -> int | None:
        if site is Site.CURRENT_GUESS:
            return self.problem.guess
        return self.fixed_sites[site]

    def holds(self, probe: Probe) -> bool:
        idx = self.site(probe.site)
        return idx is not None and (probe.test, probe.value) in self.feats[idx]

    def fires(self, rule: Rule) -> bool:
        return all(self.holds(p) for p in rule.condition)

    def landing(self, move: Move) -> int | None:
        p = self.problem
        if move.direction is Direction.LEFT:
            scan = (c for c in reversed(p.candidates) if c < p.guess)
        else:
            scan = (c for c in p.candidates if c > p.guess)
        if move.test is None:
            return next(scan, None)
        want = (move.test, move.value)
        for c in scan:
            if want in self.feats[c]:
                return c
        return None

    def outcome(self, rule: Rule) -> int | None:
        if not self.fires(rule):
            return None
        return self.landing(rule.action)

    def probes(self, templates: Templates = DEFAULT_TEMPLATES) -> Iterator[Probe]:
        tests = set(templates.tests)
        for site in templates.sites:
            idx = self.site(site)
            if idx is None:
                continue
            for test, value in self.feats[idx]:
                if test in tests and not (site is Site.IGROUP and test is Test.LICENSES):
                    yield Probe(site, test, value)

    def conditions(self, templates: Templates = DEFAULT_TEMPLATES) -> set[tuple[Probe, ...]]:
        singles = set(self.probes(templates))
        conds = {(p,) for p in singles}
        if templates.pair_with_igroup:
            ig = [p for p in singles if p.site is Site.IGROUP]
            others = [p for p in singles if p.site is not Site.IGROUP]
            conds.update((a, b) for a in ig for b in others)
        return conds

    def fixing_moves(self, templates: Templates = DEFAULT_TEMPLATES) -> list[Move]:
        """Every move in the inventory that takes this (wrong) problem to its gold group."""
        p = self.problem
        gold = p.gold
        if not isinstance(gold, LeftGroup) or gold.position not in p.candidates or gold.position == p.guess:
            return []
        target = gold.position
        if target < p.guess:
            direction = Direction.LEFT
            between = [c for c in p.candidates if target < c < p.guess]
        else:
            direction = Direction.RIGHT
            between = [c for c in p.candidates if p.guess < c < target]
        moves = []
        if not between:
            moves.append(Move(direction))
        blocked = set().union(*(self.feats[c] for c in between)) if between else set()
        for test, value in self.feats[target]:
            if (test is Test.KIND and value in templates.move_kinds) or test in templates.move_tests:
                if (test, value) not in blocked:
                    moves.append(Move(direction, test, value))
        return moves


# -- single rules ----------------------------------------------------------


def apply_rule(rule: Rule, problem: AttachmentProblem, lex: Lexicon) -> int | None:
    """The guess the rule would move the problem to, or None if it does not fire or finds no target."""
    return _Context(problem, lex).outcome(rule)


def enumerate_candidate_rules(
    problems: Iterable[AttachmentProblem], lex: Lexicon, templates: Templates = DEFAULT_TEMPLATES
) -> set[Rule]:
    """Rules instantiated from currently mislabeled problems, each fixing at least one of them."""
    rules = set()
    for p in problems:
        if p.correct:
            continue
        ctx = _Context(p, lex)
        moves = ctx.fixing_moves(templates)
        if moves:
            rules.update(Rule(c, m) for c in ctx.conditions(templates) for m in moves)
    return rules


def rule_delta(rule: Rule, problems: Iterable[AttachmentProblem], lex: Lexicon) -> tuple[int, int]:
    """(fixed, broken) counts for one sweep of ``rule``, without changing any guess."""
    fixed = broken = 0
    for p in problems:
        new = apply_rule(rule, p, lex)
        if new is None:
            continue
        gold_pos = p.gold.position if isinstance(p.gold, LeftGroup) else None
        was, now = p.guess == gold_pos, new == gold_pos
        if now and not was:
            fixed += 1
        elif was and not now:
            broken += 1
    return fixed, broken


def score_rule(rule: Rule, problems: Sequence[AttachmentProblem], lex: Lexicon) -> int:
    fixed, broken = rule_delta(rule, problems, lex)
    return fixed - broken


# -- sequences -------------------------------------------------------------


@dataclass
class RuleSequence:
    rules: list[Rule] = field(default_factory=list)
    gains: list[int] = field(default_factory=list)
    mode: Mode = Mode.ALL
    threshold: int = 2
    corpus_digest: str = ""
    templates: str = TEMPLATE_VERSION

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def dumps(self) -> str:
        lines = [
            "# attachtbl rules",
            f"# format: {FORMAT_VERSION}",
            f"# templates: {self.templates}",
            f"# mode: {self.mode.value}",
            f"# threshold: {self.threshold}",
            f"# corpus: {self.corpus_digest}",
            f"# rules: {len(self.rules)}",
        ]
        lines += [f"{g}\t{r.text()}" for r, g in zip(self.rules, self.gains)]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, source: str | None = None) -> "RuleSequence":
        from .corpus import FormatError

        meta: dict[str, str] = {}
        rules, gains = [], []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].partition(":")
                if sep:
                    meta[key.strip()] = value.strip()
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError("rule line needs GAIN, CONDITION and ACTION", lineno, 1, source)
            try:
                gains.append(int(parts[0]))
                rules.append(Rule(_parse_condition(parts[1]), _parse_action(parts[2])))
            except ValueError as exc:
                raise FormatError(str(exc), lineno, 1, source) from None
        try:
            mode = Mode(meta.get("mode", Mode.ALL.value))
            threshold = int(meta.get("threshold", "2"))
        except ValueError as exc:
            raise FormatError(f"bad header: {exc}", 1, 1, source) from None
        return cls(rules, gains, mode, threshold, meta.get("corpus", ""), meta.get("templates", TEMPLATE_VERSION))

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path: str | Path) -> "RuleSequence":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read(), str(path))


_SEXP_TOKEN = re.compile(r'\s*(\(|\)|"(?:[^"\\]|\\.)*"|[^\s()"]+)')


def _sexp(text: str):
    pos, stack, out = 0, [[]], None
    text = text.strip()
    while pos < len(text):
        m = _SEXP_TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse {text!r}")
        tok = m.group(1)
        pos = m.end()
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) < 2:
                raise ValueError(f"unbalanced ')' in {text!r}")
            done = stack.pop()
            stack[-1].append(done)
        elif tok.startswith('"'):
            stack[-1].append(("str", json.loads(tok)))
        else:
            stack[-1].append(tok)
        if text[pos:].strip() == "":
            pos = len(text)
    if len(stack) != 1 or len(stack[0]) != 1:
        raise ValueError(f"malformed expression {text!r}")
    out = stack[0][0]
    return out


def _probe_from(expr) -> Probe:
    if not isinstance(expr, list) or len(expr) not in (2, 3):
        raise ValueError(f"bad probe {expr!r}")
    site, test = Site(expr[0]), Test(expr[1])
    if test is Test.LICENSES:
        if len(expr) != 2:
            raise ValueError("licenses probes take no value")
        return Probe(site, test)
    if len(expr) != 3 or not isinstance(expr[2], tuple):
        raise ValueError(f"probe {expr!r} needs a quoted value")
    return Probe(site, test, expr[2][1])


def _parse_condition(text: str) -> tuple[Probe, ...]:
    expr = _sexp(text)
    if isinstance(expr, list) and expr and expr[0] == "and":
        return tuple(_probe_from(e) for e in expr[1:])
    return (_probe_from(expr),)


def _parse_action(text: str) -> Move:
    expr = _sexp(text)
    if not isinstance(expr, list) or not expr:
        raise ValueError(f"bad action {text!r}")
    direction = Direction(expr[0])
    if len(expr) == 1:
        return Move(direction)
    if len(expr) != 3 or not isinstance(expr[2], tuple):
        raise ValueError(f"bad action {text!r}")
    return Move(direction, Test(expr[1]), expr[2][1])


def corpus_digest(problems: Sequence[AttachmentProblem]) -> str:
    h = hashlib.sha256()
    for p in problems:
        h.update(f"{serialize_sentence(p.sentence)}\t{p.igroup_pos}\n".encode("utf-8"))
    return "sha256:" + h.hexdigest()


def _check_mode(problems: Sequence[AttachmentProblem], mode: Mode) -> None:
    for p in problems:
        if p.mode is not mode:
            raise ValueError(f"problem mode {p.mode.value} does not match rule mode {mode.value}")


def apply_sequence(rs: RuleSequence, problems: Sequence[AttachmentProblem], lex: Lexicon) -> list[int]:
    """Sweep each rule over all problems in learned order; returns (and sets) the final guesses."""
    _check_mode(problems, rs.mode)
    contexts = [_Context(p, lex) for p in problems]
    for rule in rs.rules:
        _sweep(rule, contexts)
    return [p.guess for p in problems]


def _sweep(rule: Rule, contexts: Iterable[_Context]) -> None:
    moves = []
    for ctx in contexts:
        new = ctx.outcome(rule)
        if new is not None:
            moves.append((ctx.problem, new))
    for problem, new in moves:
        problem.guess = new


# -- training --------------------------------------------------------------


@dataclass(frozen=True)
class Selection:
    rule: Rule
    net: int
    fixed: int


def count_errors(problems: Iterable[AttachmentProblem]) -> int:
    return sum(not p.correct for p in problems)


def select_rule(
    contexts: Sequence[_Context], templates: Templates = DEFAULT_TEMPLATES, floor: int = 1
) -> Selection | None:
    """Best rule by (net gain, fixes, text); None when no rule reaches ``floor``."""
    fixed: dict[tuple, int] = defaultdict(int)
    for ctx in contexts:
        if ctx.problem.correct:
            continue
        moves = ctx.fixing_moves(templates)
        if not moves:
            continue
        for cond in ctx.conditions(templates):
            for move in moves:
                fixed[(cond, move)] += 1
    if not fixed:
        return None

    # Index the currently-correct problems by single probe; a firing rule always breaks them.
    index: dict[Probe, list[_Context]] = defaultdict(list)
    for ctx in contexts:
        if ctx.problem.correct:
            for probe in ctx.probes(templates):
                index[probe].append(ctx)

    buckets: dict[int, list[tuple]] = defaultdict(list)
    for key, n in fixed.items():
        buckets[n].append(key)

    best: Selection | None = None
    best_key = None
    for good in sorted(buckets, reverse=True):
        if good < floor or (best is not None and good < best.net):
            break
        for cond, move in buckets[good]:
            limit = good - (best.net if best is not None else floor)
            broken = _count_broken(cond, move, index, limit)
            if broken is None:
                continue
            net = good - broken
            key = (-net, -good)
            if best is None or key < best_key or (key == best_key and Rule(cond, move).text() < best.rule.text()):
                best = Selection(Rule(cond, move), net, good)
                best_key = key
    return best


def _count_broken(cond: tuple[Probe, ...], move: Move, index, limit: int) -> int | None:
    """Correct problems the rule would break; None once the count exceeds ``limit``."""
    if len(cond) == 1:
        pool, rest = index.get(cond[0], ()), ()
    else:
        a, b = index.get(cond[0], ()), index.get(cond[1], ())
        pool, rest = (a, (cond[1],)) if len(a) <= len(b) else (b, (cond[0],))
    broken = 0
    for ctx in pool:
        if all(ctx.holds(p) for p in rest) and ctx.landing(move) is not None:
            broken += 1
            if broken > limit:
                return None
    return broken


def train(
    problems: Sequence[AttachmentProblem],
    lex: Lexicon,
    mode: Mode | None = None,
    threshold: int = 2,
    templates: Templates = DEFAULT_TEMPLATES,
    max_rules: int | None = None,
) -> RuleSequence:
    """Greedy TBL.  Mutates the problems' guesses to the post-training state."""
    if not problems:
        raise ValueError("cannot train on an empty problem list")
    if threshold < 1:
        raise ValueError("threshold must be a positive integer")
    mode = mode or problems[0].mode
    _check_mode(problems, mode)
    seq = RuleSequence(mode=mode, threshold=threshold, corpus_digest=corpus_digest(problems), templates=templates.version)
    contexts = [_Context(p, lex) for p in problems]
    while max_rules is None or len(seq.rules) < max_rules:
        choice = select_rule(contexts, templates, floor=threshold)
        if choice is None or choice.net < threshold:
            break
        _sweep(choice.rule, contexts)
        seq.rules.append(choice.rule)
        seq.gains.append(choice.net)
    return seq
