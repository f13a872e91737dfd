"""Scoring guesses against gold attachments, plus significance tests and per-category routing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from scipy import stats

from .corpus import LeftGroup
from .lexicon import Lexicon
from .problems import AttachmentProblem, Category, Mode, is_resolvable, nearest_left_verb
from .tbl import RuleSequence, apply_sequence

EXACT_LIMIT = 10_000


def percent(x: float | Fraction) -> Fraction:
    """Percentage rounded half-up to one decimal, returned exactly (e.g. Fraction(589, 10))."""
    scaled = Fraction(x) * 1000
    return Fraction(math.floor(scaled + Fraction(1, 2)), 10)


def fmt_percent(x: float | Fraction | None) -> str:
    if x is None:
        return "n/a"
    tenths = int(percent(x) * 10)
    sign = "-" if tenths < 0 else ""
    whole, tenth = divmod(abs(tenths), 10)
    return f"{sign}{whole}.{tenth}%"


def error_reduction(accuracy: float | Fraction, baseline: float | Fraction) -> float | Fraction | None:
    """Fraction of baseline errors removed; None when the baseline is already perfect."""
    if baseline >= 1:
        return None
    return (accuracy - baseline) / (1 - baseline)


@dataclass
class CategoryTally:
    n: int = 0
    correct: int = 0

    @property
    def accuracy(self) -> Fraction | None:
        return Fraction(self.correct, self.n) if self.n else None


@dataclass
class EvaluationReport:
    n_tried: int
    n_correct: int
    n_baseline_correct: int
    per_category: dict[Category, CategoryTally]
    n_unresolvable: int
    n_unattachable: int
    n_not_handled: int = 0

    @property
    def accuracy(self) -> Fraction:
        return Fraction(self.n_correct, self.n_tried)

    @property
    def baseline_accuracy(self) -> Fraction:
        return Fraction(self.n_baseline_correct, self.n_tried)

    @property
    def error_reduction(self) -> Fraction | None:
        return error_reduction(self.accuracy, self.baseline_accuracy)

    def to_kv(self) -> str:
        lines = [
            f"n_tried={self.n_tried}",
            f"n_correct={self.n_correct}",
            f"n_baseline_correct={self.n_baseline_correct}",
            f"accuracy={fmt_percent(self.accuracy)}",
            f"baseline_accuracy={fmt_percent(self.baseline_accuracy)}",
            f"error_reduction={fmt_percent(self.error_reduction)}",
            f"n_unresolvable={self.n_unresolvable}",
            f"n_unattachable={self.n_unattachable}",
            f"n_not_handled={self.n_not_handled}",
        ]
        for cat in Category:
            t = self.per_category[cat]
            lines += [
                f"{cat.value}.n={t.n}",
                f"{cat.value}.correct={t.correct}",
                f"{cat.value}.accuracy={fmt_percent(t.accuracy)}",
            ]
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        er = self.error_reduction
        out = [
            f"tried        {self.n_tried}",
            f"not handled  {self.n_not_handled}",
            f"baseline     {fmt_percent(self.baseline_accuracy):>7}  ({self.n_baseline_correct}/{self.n_tried})",
            f"correct      {fmt_percent(self.accuracy):>7}  ({self.n_correct}/{self.n_tried})",
            f"error red.   {fmt_percent(er):>7}",
            f"unresolvable {self.n_unresolvable}  (gold outside candidate set)",
            f"unattachable {self.n_unattachable}  (gold not a single left group)",
            "",
            f"{'category':<10}{'n':>6}{'correct':>9}{'acc':>9}",
        ]
        for cat in Category:
            t = self.per_category[cat]
            out.append(f"{cat.label:<10}{t.n:>6}{t.correct:>9}{fmt_percent(t.accuracy):>9}")
        return "\n".join(out) + "\n"


def evaluate(
    guesses: Sequence[int], problems: Sequence[AttachmentProblem], n_not_handled: int = 0
) -> EvaluationReport:
    if not problems:
        raise ValueError("cannot evaluate an empty problem list")
    if len(guesses) != len(problems):
        raise ValueError("need exactly one guess per problem")
    per_cat = {c: CategoryTally() for c in Category}
    correct = baseline = unresolvable = unattachable = 0
    for guess, p in zip(guesses, problems):
        gold = p.gold.position if isinstance(p.gold, LeftGroup) else None
        tally = per_cat[p.category]
        tally.n += 1
        if gold is None:
            unattachable += 1
        if not is_resolvable(p):
            unresolvable += 1
        if gold == guess:
            correct += 1
            tally.correct += 1
        if gold == p.adjacent:
            baseline += 1
    return EvaluationReport(
        n_tried=len(problems),
        n_correct=correct,
        n_baseline_correct=baseline,
        per_category=per_cat,
        n_unresolvable=unresolvable,
        n_unattachable=unattachable,
        n_not_handled=n_not_handled,
    )


# -- significance -----------------------------------------------------------


def binomial_significance(correct_a: int, n_a: int, correct_b: int, n_b: int) -> float:
    """Two-sided p-value that two success proportions differ.

    Exact conditional (hypergeometric) computation when both samples are at
    most 10,000; pooled two-proportion normal approximation above that.
    """
    if n_a <= 0 or n_b <= 0:
        raise ValueError("sample sizes must be positive")
    if not (0 <= correct_a <= n_a and 0 <= correct_b <= n_b):
        raise ValueError("success counts must lie within [0, n]")
    if n_a <= EXACT_LIMIT and n_b <= EXACT_LIMIT:
        table = [[correct_a, n_a - correct_a], [correct_b, n_b - correct_b]]
        p = stats.fisher_exact(table, alternative="two-sided").pvalue
    else:
        pooled = (correct_a + correct_b) / (n_a + n_b)
        se = math.sqrt(pooled * (1 - pooled) * (1 / n_a + 1 / n_b))
        if se == 0:
            return 1.0
        z = abs(correct_a / n_a - correct_b / n_b) / se
        p = 2 * stats.norm.sf(z)
    return float(min(1.0, max(0.0, p)))


def binomial_test_against_rate(correct: int, n: int, rate: float, alternative: str = "two-sided") -> float:
    """Exact binomial test of an observed count against a fixed reference success rate."""
    if n <= 0:
        raise ValueError("sample size must be positive")
    return float(stats.binomtest(correct, n, rate, alternative=alternative).pvalue)


# -- composite routing --------------------------------------------------------


@dataclass
class CompositeRouter:
    sequences: dict[Category, RuleSequence] = field(default_factory=dict)

    def __post_init__(self):
        missing = [c.value for c in Category if c not in self.sequences]
        if missing:
            raise ValueError(f"router has no sequence for: {', '.join(missing)}")

    @classmethod
    def fill(cls, partial: Mapping[Category, RuleSequence], mode: Mode, default: RuleSequence | None = None):
        """Route unmapped categories to ``default`` (or an empty sequence)."""
        fallback = default if default is not None else RuleSequence(mode=mode)
        return cls({c: partial[c] if c in partial else fallback for c in Category})


def composite_evaluate(
    router: CompositeRouter, problems: Sequence[AttachmentProblem], lex: Lexicon, n_not_handled: int = 0
) -> EvaluationReport:
    for seq in router.sequences.values():
        for p in problems:
            if p.mode is not seq.mode:
                raise ValueError(f"routed sequence mode {seq.mode.value} does not match problem mode {p.mode.value}")
    for p in problems:
        p.reset()
    for cat in Category:
        members = [p for p in problems if p.category is cat]
        if members:
            apply_sequence(router.sequences[cat], members, lex)
    return evaluate([p.guess for p in problems], problems, n_not_handled)


# -- category statistics --------------------------------------------------------


@dataclass
class CategoryStats:
    """Counts behind one row of the category-properties table."""

    n: int = 0
    adjacent: int = 0
    verb_or_adjacent: int = 0
    unattachable: int = 0

    def rates(self, total: int) -> dict[str, Fraction | None]:
        n = self.n
        return {
            "prev": Fraction(n, total) if total else None,
            "A": Fraction(self.adjacent, n) if n else None,
            "V-A": Fraction(self.verb_or_adjacent, n) if n else None,
            "Err": Fraction(self.unattachable, n) if n else None,
        }


def category_stats(problems: Sequence[AttachmentProblem]) -> dict[Category | None, CategoryStats]:
    """Per-category counts of adjacent, verb-or-adjacent and unattachable golds; key None is overall."""
    rows: dict[Category | None, CategoryStats] = {c: CategoryStats() for c in Category}
    rows[None] = CategoryStats()
    for p in problems:
        gold = p.gold.position if isinstance(p.gold, LeftGroup) else None
        verb = nearest_left_verb(p.sentence, p.igroup_pos)
        for row in (rows[p.category], rows[None]):
            row.n += 1
            row.adjacent += gold == p.adjacent
            row.verb_or_adjacent += gold is not None and gold in (p.adjacent, verb)
            row.unattachable += gold is None
    return rows


def format_stats(rows: Mapping[Category | None, CategoryStats]) -> str:
    total = rows[None].n
    out = [f"{'Category':<10}{'A':>8}{'V-A':>8}{'Err':>8}{'Prev':>8}{'n':>6}"]
    for key in [*Category, None]:
        row = rows[key]
        r = row.rates(total)
        name = "Overall" if key is None else key.label
        out.append(
            f"{name:<10}{fmt_percent(r['A']):>8}{fmt_percent(r['V-A']):>8}"
            f"{fmt_percent(r['Err']):>8}{fmt_percent(r['prev']):>8}{row.n:>6}"
        )
    return "\n".join(out) + "\n"
