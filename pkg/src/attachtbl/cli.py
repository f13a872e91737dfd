"""Command-line front end.

    attachtbl train --corpus train.grp --lexicon lex.tsv --mode v-a --threshold 2 --out rules.txt
    attachtbl eval --corpus test.grp --lexicon lex.tsv --rules rules.txt [--kv]
    attachtbl stats --corpus test.grp --lexicon lex.tsv

``--lexicon builtin`` selects the small illustrative lexicon shipped with the
package.  Corpora ending in ``.quad`` are read as quadruples.
"""

from __future__ import annotations

import argparse
import sys

from .corpus import FormatError, is_quadruple_path, load_corpus
from .evaluation import CompositeRouter, category_stats, composite_evaluate, evaluate, format_stats
from .lexicon import BUNDLED_LEXICON, load_lexicon
from .problems import Category, Mode, extract_corpus
from .tbl import RuleSequence, apply_sequence, train


class UsageError(Exception):
    pass


def _lexicon(args):
    if not args.lexicon:
        raise UsageError("a lexicon is required to categorize problems (--lexicon PATH or --lexicon builtin)")
    return load_lexicon(BUNDLED_LEXICON if args.lexicon == "builtin" else args.lexicon)


def _problems(args, lex, mode: Mode):
    sentences = []
    for path in args.corpus:
        sentences.extend(load_corpus(path))
    problems, tally = extract_corpus(sentences, lex, mode)
    return problems, sum(tally.values())


def _mode(args, default: Mode | None = None) -> Mode | None:
    return Mode(args.mode) if args.mode else default


def _rules_mode(args, sequences) -> Mode:
    modes = {s.mode for s in sequences}
    if len(modes) > 1:
        raise UsageError("rule files were trained in different modes")
    asked = _mode(args)
    if not modes:
        return asked or Mode.ALL
    rules_mode = modes.pop()
    if asked is not None and asked is not rules_mode:
        raise UsageError(f"--mode {asked.value} conflicts with rules trained in mode {rules_mode.value}")
    return rules_mode


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_extract(args) -> None:
    lex = _lexicon(args)
    mode = _mode(args, Mode.ALL)
    problems, _ = _problems(args, lex, mode)
    lines = [
        f"{p.sentence_id}\t{p.igroup_pos}\t{p.category.value}\t{p.mode.value}\t"
        f"{','.join(map(str, p.candidates))}\t{p.gold.spec()}"
        for p in problems
    ]
    _emit(args, "".join(line + "\n" for line in lines))


def cmd_categorize(args) -> None:
    lex = _lexicon(args)
    problems, _ = _problems(args, lex, Mode.ALL)
    lines = [
        f"{p.sentence_id}\t{p.igroup_pos}\t{p.category.value}\t{p.sentence.groups[p.igroup_pos].text}"
        for p in problems
    ]
    _emit(args, "".join(line + "\n" for line in lines))


def cmd_train(args) -> None:
    lex = _lexicon(args)
    mode = _mode(args, Mode.ALL)
    threshold = args.threshold
    if threshold is None:
        threshold = 3 if any(is_quadruple_path(p) for p in args.corpus) else 2
    if threshold < 1:
        raise UsageError("--threshold must be a positive integer")
    problems, _ = _problems(args, lex, mode)
    if not problems:
        raise UsageError("the corpus yields no tryable attachment problems")
    seq = train(problems, lex, mode, threshold)
    _emit(args, seq.dumps())


def cmd_apply(args) -> None:
    lex = _lexicon(args)
    seq = RuleSequence.load(args.rules[0])
    mode = _rules_mode(args, [seq])
    problems, _ = _problems(args, lex, mode)
    guesses = apply_sequence(seq, problems, lex)
    lines = [
        f"{p.sentence_id}\t{p.igroup_pos}\t{p.category.value}\t{g}\t{p.gold.spec()}"
        for p, g in zip(problems, guesses)
    ]
    _emit(args, "".join(line + "\n" for line in lines))


def _report(args, report) -> str:
    text = report.to_text()
    if args.kv:
        text += "\n" + report.to_kv()
    return text


def cmd_eval(args) -> None:
    lex = _lexicon(args)
    seq = RuleSequence.load(args.rules[0]) if args.rules else None
    mode = _rules_mode(args, [seq] if seq else [])
    problems, not_handled = _problems(args, lex, mode)
    if not problems:
        raise UsageError("the corpus yields no tryable attachment problems")
    guesses = apply_sequence(seq, problems, lex) if seq else [p.guess for p in problems]
    _emit(args, _report(args, evaluate(guesses, problems, not_handled)))


def cmd_composite(args) -> None:
    lex = _lexicon(args)
    routed: dict[Category, RuleSequence] = {}
    default = None
    for spec in args.rules or []:
        name, sep, path = spec.partition("=")
        if sep:
            try:
                routed[Category(name)] = RuleSequence.load(path)
            except ValueError:
                raise UsageError(f"unknown category {name!r} in --rules {spec}") from None
        else:
            default = RuleSequence.load(spec)
    mode = _rules_mode(args, [*routed.values(), *([default] if default else [])])
    router = CompositeRouter.fill(routed, mode, default)
    problems, not_handled = _problems(args, lex, mode)
    if not problems:
        raise UsageError("the corpus yields no tryable attachment problems")
    _emit(args, _report(args, composite_evaluate(router, problems, lex, not_handled)))


def cmd_stats(args) -> None:
    lex = _lexicon(args)
    problems, _ = _problems(args, lex, Mode.ALL)
    _emit(args, format_stats(category_stats(problems)))


COMMANDS = {
    "extract": cmd_extract,
    "categorize": cmd_categorize,
    "train": cmd_train,
    "apply": cmd_apply,
    "eval": cmd_eval,
    "composite": cmd_composite,
    "stats": cmd_stats,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="attachtbl", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--corpus", action="append", required=True, help="corpus file (.grp or .quad); repeatable")
        p.add_argument("--lexicon", help="lexicon file, or 'builtin'")
        p.add_argument("--out", help="write output here instead of stdout")
        if name in ("extract", "train", "apply", "eval", "composite"):
            p.add_argument("--mode", choices=[m.value for m in Mode])
        if name == "train":
            p.add_argument("--threshold", type=int, help="minimum net repairs per rule (default 2, or 3 for .quad)")
        if name in ("apply", "eval", "composite"):
            p.add_argument(
                "--rules",
                action="append",
                required=name == "apply",
                help="rule file; for composite, CATEGORY=PATH (unrouted categories use a bare PATH or no rules)",
            )
        if name in ("eval", "composite"):
            p.add_argument("--kv", action="store_true", help="append a key=value metrics block")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (FormatError, UsageError, OSError, ValueError) as exc:
        print(f"attachtbl {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
