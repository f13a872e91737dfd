import copy

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from attachtbl.corpus import parse_sentence
from attachtbl.problems import Mode, extract_corpus, extract_problems
from attachtbl.tbl import (
    Direction,
    Move,
    Probe,
    Rule,
    RuleSequence,
    Site,
    Test as ProbeTest,
    apply_rule,
    apply_sequence,
    enumerate_candidate_rules,
    rule_delta,
    score_rule,
    train,
)

TO_ARTIFACT = Rule(
    (Probe(Site.IGROUP, ProbeTest.WORD, "to"), Probe(Site.CURRENT_GUESS, ProbeTest.NOUNCLASS, "artifact")),
    Move(Direction.LEFT, ProbeTest.KIND, "vg"),
)

SIX = [
    "[ng I] [vg had sent] [ng a cup] [ig to {gold=1}] [ng her]",
    "[ng she] [vg gave] [ng the letter] [ig to {gold=1}] [ng him]",
    "[ng we] [vg sent] [ng the cups] [ig to {gold=1}] [ng them]",
    "[ng they] [vg gave] [ng a cup] [ig to {gold=1}] [ng me]",
    "[ng the man] [vg saw] [ng the dog] [ig with {gold=0}] [ng glee]",
    "[ng a cup] [vg held] [ng the letter] [ig of {gold=2}] [ng thanks]",
]


def fresh(problems):
    # sentences are immutable, so a shallow copy per problem is independent
    return [copy.copy(p) for p in problems]


def problems_of(lines, lex, mode=Mode.ALL):
    problems, _ = extract_corpus([parse_sentence(l) for l in lines], lex, mode)
    return problems


def test_apply_rule_example(lex, example_sentence):
    (p,) = extract_problems(example_sentence, lex)
    assert apply_rule(TO_ARTIFACT, p, lex) == 1
    assert p.guess == 2  # apply_rule does not mutate


def test_absent_site_probe_never_fires(lex):
    (p,) = extract_problems(parse_sentence("[ng a] [ng cup] [ig to {gold=0}] [ng b]"), lex)
    rule = Rule((Probe(Site.NEAREST_LEFT_VERB, ProbeTest.KIND, "vg"),), Move(Direction.LEFT))
    assert apply_rule(rule, p, lex) is None


def test_left_from_leftmost_candidate(lex, example_sentence):
    (p,) = extract_problems(example_sentence, lex)
    p.guess = 0
    assert apply_rule(Rule((Probe(Site.IGROUP, ProbeTest.WORD, "to"),), Move(Direction.LEFT)), p, lex) is None
    assert apply_rule(Rule((Probe(Site.IGROUP, ProbeTest.WORD, "to"),), Move(Direction.RIGHT)), p, lex) == 1


def test_condition_mismatch(lex, example_sentence):
    (p,) = extract_problems(example_sentence, lex)
    assert apply_rule(Rule((Probe(Site.IGROUP, ProbeTest.WORD, "of"),), Move(Direction.LEFT)), p, lex) is None


def test_rule_shape_invariants():
    with pytest.raises(ValueError):
        Rule((), Move(Direction.LEFT))
    p = Probe(Site.IGROUP, ProbeTest.WORD, "to")
    with pytest.raises(ValueError):
        Rule((p, Probe(Site.IGROUP, ProbeTest.WORD, "of")), Move(Direction.LEFT))
    with pytest.raises(ValueError):
        Rule((p, p, p), Move(Direction.LEFT))


def test_rule_text():
    assert TO_ARTIFACT.text() == '(and (IGROUP word "to") (CURRENT_GUESS nclass "artifact"))\t(LEFT kind "vg")'
    assert Probe(Site.ADJACENT_LEFT, ProbeTest.LICENSES).text() == "(ADJACENT_LEFT licenses)"


# -- candidates ----------------------------------------------------------------------


def test_candidates_contain_igroup_word_verb_move(lex, example_sentence):
    (p,) = extract_problems(example_sentence, lex)
    rules = enumerate_candidate_rules([p], lex)
    assert Rule((Probe(Site.IGROUP, ProbeTest.WORD, "to"),), Move(Direction.LEFT, ProbeTest.KIND, "vg")) in rules
    assert TO_ARTIFACT in rules
    for r in rules:
        assert apply_rule(r, p, lex) == 1


def test_no_mislabeled_problems_no_candidates(lex):
    problems = problems_of(["[ng I] [vg sent] [ng a cup] [ig of {gold=2}] [ng tea]"], lex)
    assert enumerate_candidate_rules(problems, lex) == set()


def test_candidate_set_semantics(lex):
    one = problems_of([SIX[0]], lex)
    two = problems_of([SIX[0], SIX[0]], lex)
    assert enumerate_candidate_rules(one, lex) == enumerate_candidate_rules(two, lex)
    assert enumerate_candidate_rules(two[::-1], lex) == enumerate_candidate_rules(two, lex)


# -- scoring ---------------------------------------------------------------------------


def test_score_arithmetic(lex):
    lines = SIX[:3] + ["[ng I] [vg sent] [ng a cup] [ig to {gold=2}] [ng tea]"]
    problems = problems_of(lines, lex)
    assert rule_delta(TO_ARTIFACT, problems, lex) == (3, 1)
    assert score_rule(TO_ARTIFACT, problems, lex) == 2


def test_rule_that_never_fires_scores_zero(lex):
    never = Rule((Probe(Site.IGROUP, ProbeTest.WORD, "zzz"),), Move(Direction.LEFT))
    assert score_rule(never, problems_of(SIX, lex), lex) == 0


def test_scores_match_fresh_copy_recount(lex):
    problems = problems_of(SIX + SIX[:4], lex)
    assert len(problems) == 10
    for rule in enumerate_candidate_rules(problems, lex):
        copies = fresh(problems)
        before = oracle.error_count(copies)
        oracle.apply(rule, copies, lex)
        assert score_rule(rule, problems, lex) == before - oracle.error_count(copies)


# -- training -----------------------------------------------------------------------


def test_no_errors_no_rules(lex):
    problems = problems_of(["[ng I] [vg sent] [ng a cup] [ig of {gold=2}] [ng tea]"] * 3, lex)
    assert len(train(problems, lex)) == 0


def test_six_problem_example(lex):
    problems = problems_of(SIX, lex)
    expected, net, fixed = oracle.best_rule(fresh(problems), lex)
    seq = train(problems, lex, threshold=2)
    assert seq.rules == [expected]
    assert seq.gains == [net] == [4]
    assert sum(p.correct for p in problems) == 5

    held_out = problems_of(SIX, lex)
    apply_sequence(seq, held_out, lex)
    assert sum(p.correct for p in held_out) == 5


def test_empty_sequence_keeps_adjacent(lex):
    problems = problems_of(SIX, lex)
    guesses = apply_sequence(RuleSequence(), problems, lex)
    assert guesses == [p.igroup_pos - 1 for p in problems]


def test_mode_mismatch(lex):
    seq = train(problems_of(SIX, lex), lex)
    with pytest.raises(ValueError):
        apply_sequence(seq, problems_of(SIX, lex, Mode.VA), lex)
    with pytest.raises(ValueError):
        train(problems_of(SIX, lex), lex, mode=Mode.VA)


def test_train_errors(lex):
    with pytest.raises(ValueError):
        train([], lex)
    with pytest.raises(ValueError):
        train(problems_of(SIX, lex), lex, threshold=0)


def test_rule_file_round_trip(lex, tmp_path):
    seq = train(problems_of(SIX * 2, lex), lex, threshold=1)
    seq.rules.append(Rule((Probe(Site.ADJACENT_LEFT, ProbeTest.LICENSES), Probe(Site.IGROUP, ProbeTest.WORD, 'a "q"\\')), Move(Direction.RIGHT)))
    seq.gains.append(1)
    text = seq.dumps()
    again = RuleSequence.loads(text)
    assert again == seq
    assert again.dumps() == text
    path = tmp_path / "r.txt"
    seq.save(path)
    assert RuleSequence.load(path) == seq


def test_rule_file_errors():
    from attachtbl.corpus import FormatError

    with pytest.raises(FormatError):
        RuleSequence.loads("# mode: all\n3\t(IGROUP word \"to\")\n")
    with pytest.raises(FormatError):
        RuleSequence.loads("# mode: all\nx\t(IGROUP word \"to\")\t(LEFT)\n")
    with pytest.raises(FormatError):
        RuleSequence.loads("# mode: all\n3\t(NOWHERE word \"to\")\t(LEFT)\n")


def test_training_is_deterministic(lex, bundled_sentences):
    sample = bundled_sentences[:150]
    a = train(extract_corpus(sample, lex)[0], lex, threshold=2)
    b = train(extract_corpus(list(reversed(sample))[::-1], lex)[0], lex, threshold=2)
    assert a.dumps() == b.dumps()


def test_va_training_stays_in_va_candidates(lex, bundled_sentences):
    problems, _ = extract_corpus(bundled_sentences[:200], lex, Mode.VA)
    train(problems, lex, threshold=1)
    for p in problems:
        assert p.guess in p.candidates


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(SIX + ["[ng I] [vg sent] [ng a cup] [ig to {gold=2}] [ng tea]"]), min_size=1, max_size=12),
       st.integers(1, 3))
def test_guess_containment_and_monotonicity(lex, lines, threshold):
    problems = problems_of(lines, lex)
    seq = train(fresh(problems), lex, threshold=threshold)
    errors = oracle.error_count(problems)
    for rule, gain in zip(seq.rules, seq.gains):
        oracle.apply(rule, problems, lex)
        now = oracle.error_count(problems)
        assert errors - now == gain >= threshold
        errors = now
        assert all(p.guess in p.candidates for p in problems)
