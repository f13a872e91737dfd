"""Brute-force recount oracle for rule selection.

Works from the rule-template inventory and problem definitions alone: it
computes site features, enumerates every condition seen anywhere and every
move, and scores all (condition, move) pairs at once as a matrix product.
It shares no code with the learner beyond the Rule/Probe/Move value types,
which it uses only to name rules and to apply the textual tie-break.
"""

from __future__ import annotations

import numpy as np

from attachtbl.corpus import GroupKind, LeftGroup
from attachtbl.tbl import Direction, Move, Probe, Rule, Site, Test

SITES = list(Site)
MOVE_KINDS = ("vg", "ng")


def site_positions(p) -> dict:
    verb = None
    for i in range(p.igroup_pos - 1, -1, -1):
        if p.sentence.groups[i].kind is GroupKind.VERB:
            verb = i
            break
    return {
        Site.IGROUP: p.igroup_pos,
        Site.RIGHT_NEIGHBOR: p.igroup_pos + 1,
        Site.CURRENT_GUESS: p.guess,
        Site.ADJACENT_LEFT: p.igroup_pos - 1,
        Site.NEAREST_LEFT_VERB: verb,
    }


def features(p, g: int, lex) -> set:
    group = p.sentence.groups[g]
    tok = group.tokens[group.head_index]
    head = tok.surface
    out = {(Test.WORD, head), (Test.KIND, group.kind.value)}
    if group.kind is GroupKind.IGROUP and len(group.tokens) > 1:
        out.add((Test.WORD, "_".join(t.surface for t in group.tokens)))
    for t in ({tok.pos} if tok.pos else lex.pos(head)):
        out.add((Test.POS, t))
    for s in lex.stems(head):
        out.add((Test.STEM, s))
    for c in lex.noun_classes(head):
        out.add((Test.NOUNCLASS, c))
    for c in lex.verb_classes(head):
        out.add((Test.VERBCLASS, c))
    for f in lex.subcats(head):
        out.add((Test.SUBCAT, f))
    if g != p.igroup_pos:
        ig = p.sentence.groups[p.igroup_pos]
        forms = {ig.head, "_".join(t.surface for t in ig.tokens)}
        if forms & set(lex.licensed_preps(head)):
            out.add((Test.LICENSES, ""))
    return out


def single_probes(p, lex) -> set:
    probes = set()
    for site, g in site_positions(p).items():
        if g is None:
            continue
        for test, value in features(p, g, lex):
            if site is Site.IGROUP and test is Test.LICENSES:
                continue
            probes.add(Probe(site, test, value))
    return probes


def conditions_of(p, lex) -> set:
    singles = single_probes(p, lex)
    conds = {(s,) for s in singles}
    ig = [s for s in singles if s.site is Site.IGROUP]
    rest = [s for s in singles if s.site is not Site.IGROUP]
    conds |= {(a, b) for a in ig for b in rest}
    return conds


def all_moves(problems, lex) -> list:
    moves = [Move(Direction.LEFT), Move(Direction.RIGHT)]
    values = set()
    for p in problems:
        for g in p.candidates:
            for test, value in features(p, g, lex):
                if test in (Test.NOUNCLASS, Test.VERBCLASS):
                    values.add((test, value))
    values |= {(Test.KIND, k) for k in MOVE_KINDS}
    for d in Direction:
        moves += [Move(d, t, v) for t, v in sorted(values, key=lambda x: (x[0].value, x[1]))]
    return moves


def landing(p, move, lex):
    if move.direction is Direction.LEFT:
        order = sorted((c for c in p.candidates if c < p.guess), reverse=True)
    else:
        order = sorted(c for c in p.candidates if c > p.guess)
    for c in order:
        if move.test is None or (move.test, move.value) in features(p, c, lex):
            return c
    return None


def gold_pos(p):
    return p.gold.position if isinstance(p.gold, LeftGroup) else None


def apply(rule, problems, lex) -> None:
    """One sweep; decisions are made on the pre-sweep state."""
    updates = []
    for p in problems:
        conds = conditions_of(p, lex)
        if tuple(rule.condition) in conds:
            new = landing(p, rule.action, lex)
            if new is not None:
                updates.append((p, new))
    for p, new in updates:
        p.guess = new


def best_rule(problems, lex):
    """(rule, net, fixed) maximising net, then fixed, then smallest text; None if nothing positive."""
    per_problem = [conditions_of(p, lex) for p in problems]
    conds = sorted(set().union(*per_problem), key=lambda c: tuple(x.text() for x in c))
    cidx = {c: i for i, c in enumerate(conds)}
    C = np.zeros((len(conds), len(problems)), dtype=np.int64)
    for j, cs in enumerate(per_problem):
        for c in cs:
            C[cidx[c], j] = 1
    moves = all_moves(problems, lex)
    D = np.zeros((len(moves), len(problems)), dtype=np.int64)
    for i, m in enumerate(moves):
        for j, p in enumerate(problems):
            new = landing(p, m, lex)
            if new is None:
                continue
            gold = gold_pos(p)
            was, now = p.guess == gold, new == gold
            D[i, j] = int(now and not was) - int(was and not now)
    net = C @ D.T
    fixed = C @ (D == 1).T.astype(np.int64)
    top = net.max() if net.size else 0
    if top <= 0:
        return None
    rows, cols = np.nonzero(net == top)
    best_fixed = fixed[rows, cols].max()
    ties = [Rule(conds[r], moves[c]) for r, c in zip(rows, cols) if fixed[r, c] == best_fixed]
    winner = min(ties, key=lambda r: r.text())
    return winner, int(top), int(best_fixed)


def error_count(problems) -> int:
    return sum(gold_pos(p) != p.guess or gold_pos(p) is None for p in problems)
