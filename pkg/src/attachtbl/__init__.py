"""Learned attachment of prepositions and subordinate conjunctions to syntax groups."""

from .corpus import (
    Attach,
    CoordinationOfGroups,
    FormatError,
    GroupKind,
    LeftGroup,
    Quadruple,
    RightAttachment,
    Sentence,
    SyntaxGroup,
    Token,
    Unattachable,
    coarse_pos_tag,
    head_word,
    load_corpus,
    parse_quadruple,
    parse_sentence,
    quadruple_to_sentence,
    serialize_sentence,
)
from .evaluation import (
    CompositeRouter,
    EvaluationReport,
    binomial_significance,
    category_stats,
    composite_evaluate,
    error_reduction,
    evaluate,
)
from .lexicon import Lexicon, is_preposition, load_lexicon
from .problems import (
    AttachmentProblem,
    Category,
    Mode,
    categorize_problem,
    extract_corpus,
    extract_problems,
    is_resolvable,
    nearest_left_verb,
)
from .tbl import (
    Direction,
    Move,
    Probe,
    Rule,
    RuleSequence,
    Site,
    Test,
    apply_rule,
    apply_sequence,
    enumerate_candidate_rules,
    score_rule,
    train,
)

__version__ = "0.1.0"
