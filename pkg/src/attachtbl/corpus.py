"""Sentences of syntax groups, plus the two on-disk corpus formats.

Group-annotated sentences, one per line::

    [ng I] [vg had sent] [ng a cup] [ig to {gold=1}] [ng her]

``KIND`` is one of ``ng vg jg rg ig``.  A token may carry a tag as
``word/TAG``.  Only ``ig`` groups take a ``{gold=SPEC}`` annotation where
``SPEC`` names a left group by index or takes one of the forms
``right``, ``coord:i,j,...``, ``none:REASON``.
Material outside brackets (punctuation, mostly) is skipped.

Quadruples, one per line: ``v n1 p n2 label`` with label ``V`` or ``N``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

UNTAGGED = ""
NUMBER = "NUMBER"
NONNUMBER = "NONNUMBER"

_TAG_RE = re.compile(r"[A-Z][A-Z$]*\Z")
_ESCAPABLE = set("[]{}\\/")
_DIGITS = frozenset("0123456789")


class FormatError(ValueError):
    """Malformed corpus input; carries 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        where = f"line {line}, column {column}"
        if source:
            where = f"{source}: {where}"
        super().__init__(f"{where}: {message}")


class GroupKind(enum.Enum):
    NOUN = "ng"
    VERB = "vg"
    ADJECTIVE = "jg"
    ADVERB = "rg"
    IGROUP = "ig"


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str = UNTAGGED

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")

    @property
    def tagged(self) -> bool:
        return self.pos != UNTAGGED


def _default_head(kind: GroupKind, tokens: tuple[Token, ...]) -> int:
    if kind is GroupKind.VERB:
        for i in range(len(tokens) - 1, -1, -1):
            if tokens[i].pos.startswith("VB"):
                return i
    return len(tokens) - 1


@dataclass(frozen=True)
class SyntaxGroup:
    kind: GroupKind
    tokens: tuple[Token, ...]
    head_index: int = -1

    def __post_init__(self):
        tokens = tuple(self.tokens)
        if not tokens:
            raise ValueError("a syntax group needs at least one token")
        object.__setattr__(self, "tokens", tokens)
        if self.head_index == -1:
            object.__setattr__(self, "head_index", _default_head(self.kind, tokens))
        if not 0 <= self.head_index < len(tokens):
            raise ValueError(f"head_index {self.head_index} out of range")

    @classmethod
    def of(cls, kind: GroupKind | str, *words: str) -> "SyntaxGroup":
        """Build a group from bare words (untagged), e.g. ``SyntaxGroup.of("ng", "a", "cup")``."""
        return cls(GroupKind(kind), tuple(Token(w) for w in words))

    @property
    def head(self) -> str:
        return self.tokens[self.head_index].surface

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    @property
    def joined(self) -> str:
        """Multi-word form with underscores, the way preposition lists spell it."""
        return "_".join(t.surface for t in self.tokens)


def head_word(group: SyntaxGroup) -> str:
    return group.tokens[group.head_index].surface


# -- gold targets ----------------------------------------------------------


@dataclass(frozen=True)
class LeftGroup:
    position: int

    def spec(self) -> str:
        return str(self.position)


@dataclass(frozen=True)
class RightAttachment:
    def spec(self) -> str:
        return "right"


@dataclass(frozen=True)
class CoordinationOfGroups:
    positions: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "positions", frozenset(self.positions))
        if len(self.positions) < 2:
            raise ValueError("a coordination needs at least two groups")

    def spec(self) -> str:
        return "coord:" + ",".join(str(i) for i in sorted(self.positions))


@dataclass(frozen=True)
class Unattachable:
    reason: str = ""

    def spec(self) -> str:
        return "none:" + self.reason


GoldTarget = Union[LeftGroup, RightAttachment, CoordinationOfGroups, Unattachable]


def parse_gold_spec(spec: str) -> GoldTarget:
    """Parse the text after ``gold=``.  Raises ValueError on bad input."""
    if spec == "right":
        return RightAttachment()
    if spec.startswith("none:"):
        return Unattachable(spec[5:])
    if spec.startswith("coord:"):
        parts = spec[6:].split(",")
        if not all(p.isdigit() for p in parts):
            raise ValueError(f"bad coordination spec {spec!r}")
        return CoordinationOfGroups(frozenset(int(p) for p in parts))
    if spec.isdigit():
        return LeftGroup(int(spec))
    raise ValueError(f"bad gold spec {spec!r}")


# -- sentences -------------------------------------------------------------


@dataclass(frozen=True)
class Sentence:
    groups: tuple[SyntaxGroup, ...]
    gold_attachments: Mapping[int, GoldTarget] = field(default_factory=dict)

    def __post_init__(self):
        groups = tuple(self.groups)
        object.__setattr__(self, "groups", groups)
        gold = dict(sorted(self.gold_attachments.items()))
        for pos, target in gold.items():
            if not 0 <= pos < len(groups) or groups[pos].kind is not GroupKind.IGROUP:
                raise ValueError(f"gold key {pos} is not an I-group position")
            _check_target(pos, target, len(groups))
        object.__setattr__(self, "gold_attachments", MappingProxyType(gold))

    def __hash__(self):
        return hash((self.groups, tuple(self.gold_attachments.items())))

    def __len__(self):
        return len(self.groups)

    def igroup_positions(self) -> list[int]:
        return [i for i, g in enumerate(self.groups) if g.kind is GroupKind.IGROUP]


def _check_target(pos: int, target: GoldTarget, n_groups: int) -> None:
    if isinstance(target, LeftGroup):
        if not 0 <= target.position < pos:
            raise ValueError(f"gold {target.position} is not strictly left of I-group {pos}")
    elif isinstance(target, CoordinationOfGroups):
        bad = [i for i in target.positions if not 0 <= i < pos]
        if bad:
            raise ValueError(f"coordinated groups {bad} are not strictly left of I-group {pos}")


# -- group-annotated format ------------------------------------------------


def _escape(text: str) -> str:
    return "".join("\\" + c if c in _ESCAPABLE else c for c in text)


def _split_word(raw: str) -> tuple[str, str]:
    """Split an unescaped-slash token into (surface, tag); raw uses \\x00 for an unescaped '/'."""
    if "\x00" in raw:
        idx = raw.rindex("\x00")
        surface, tag = raw[:idx], raw[idx + 1 :]
        if surface and _TAG_RE.match(tag):
            return surface.replace("\x00", "/"), tag
    return raw.replace("\x00", "/"), UNTAGGED


def parse_sentence(line: str, lineno: int = 1, source: str | None = None) -> Sentence:
    """Parse one group-annotated line into a Sentence."""

    def fail(msg: str, col: int):
        raise FormatError(msg, lineno, col + 1, source)

    groups: list[SyntaxGroup] = []
    gold: dict[int, GoldTarget] = {}
    i, n = 0, len(line)
    while i < n:
        c = line[i]
        if c.isspace():
            i += 1
            continue
        if c in "]{}":
            fail(f"unexpected {c!r} outside a group", i)
        if c != "[":
            # outside material: skip a bare token
            while i < n and not line[i].isspace() and line[i] != "[":
                if line[i] == "\\":
                    i += 1
                elif line[i] in "]{}":
                    fail(f"unexpected {line[i]!r} outside a group", i)
                i += 1
            continue
        open_col = i
        i += 1
        m = re.compile(r"([a-z]+)(?=\s|\])").match(line, i)
        if not m:
            fail("missing group kind", i)
        try:
            kind = GroupKind(m.group(1))
        except ValueError:
            fail(f"unknown group kind {m.group(1)!r}", i)
        i = m.end()
        tokens: list[Token] = []
        spec = None
        spec_col = 0
        buf: list[str] = []
        while True:
            if i >= n:
                fail("unclosed group", open_col)
            c = line[i]
            if c == "\\":
                if i + 1 >= n or line[i + 1] not in _ESCAPABLE:
                    fail("bad escape", i)
                buf.append(line[i + 1])
                i += 2
                continue
            if c.isspace() or c in "]{":
                if buf:
                    surface, tag = _split_word("".join(buf))
                    tokens.append(Token(surface, tag))
                    buf = []
                if c == "]":
                    i += 1
                    break
                if c == "{":
                    if spec is not None:
                        fail("duplicate gold annotation", i)
                    spec_col = i
                    close = line.find("}", i)
                    if close < 0:
                        fail("unclosed gold annotation", i)
                    body = line[i + 1 : close]
                    if not body.startswith("gold="):
                        fail("annotation must be {gold=SPEC}", i)
                    spec = body[5:]
                    i = close + 1
                    continue
                i += 1
                continue
            if c == "[":
                fail("nested '['", i)
            if c == "}":
                fail("unexpected '}'", i)
            buf.append("\x00" if c == "/" else c)
            i += 1
        if not tokens:
            fail("empty group", open_col)
        pos = len(groups)
        groups.append(SyntaxGroup(kind, tuple(tokens)))
        if spec is not None:
            if kind is not GroupKind.IGROUP:
                fail("gold annotation on a non-ig group", spec_col)
            try:
                target = parse_gold_spec(spec)
                _check_target(pos, target, 0)
            except ValueError as exc:
                fail(str(exc), spec_col)
            gold[pos] = target
    return Sentence(tuple(groups), gold)


def serialize_sentence(sentence: Sentence) -> str:
    parts = []
    for pos, g in enumerate(sentence.groups):
        words = []
        for t in g.tokens:
            w = _escape(t.surface)
            words.append(f"{w}/{t.pos}" if t.tagged else w)
        body = " ".join(words)
        target = sentence.gold_attachments.get(pos)
        if target is not None:
            body += " {gold=" + target.spec() + "}"
        parts.append(f"[{g.kind.value} {body}]")
    return " ".join(parts)


def _records(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, line


def read_sentences(lines: Iterable[str], source: str | None = None) -> list[Sentence]:
    return [parse_sentence(line, lineno, source) for lineno, line in _records(lines)]


# -- quadruples ------------------------------------------------------------


class Attach(enum.Enum):
    VERB = "V"
    NOUN = "N"


@dataclass(frozen=True)
class Quadruple:
    v: str
    n1: str
    p: str
    n2: str
    label: Attach

    def __post_init__(self):
        if not all((self.v, self.n1, self.p, self.n2)):
            raise ValueError("quadruple head words must be non-empty")


def parse_quadruple(line: str, lineno: int = 1, source: str | None = None) -> Quadruple:
    fields = line.split()
    if len(fields) != 5:
        raise FormatError(f"expected 5 fields, got {len(fields)}", lineno, 1, source)
    try:
        label = Attach(fields[4])
    except ValueError:
        raise FormatError(f"unknown label {fields[4]!r}", lineno, line.rfind(fields[4]) + 1, source) from None
    return Quadruple(*fields[:4], label)


def read_quadruples(lines: Iterable[str], source: str | None = None) -> list[Quadruple]:
    return [parse_quadruple(line, lineno, source) for lineno, line in _records(lines)]


def coarse_pos_tag(word: str) -> str:
    """NUMBER for words made only of digits, commas and periods (with a digit), else NONNUMBER."""
    if not word:
        raise ValueError("cannot tag an empty word")
    if any(c in _DIGITS for c in word) and all(c in _DIGITS or c in ",." for c in word):
        return NUMBER
    return NONNUMBER


def quadruple_to_sentence(q: Quadruple) -> Sentence:
    """Emit ``[vg v][ng n1][ig p][ng n2]`` with coarse tags and gold on the I-group."""

    def group(kind, word):
        return SyntaxGroup(kind, (Token(word, coarse_pos_tag(word)),), 0)

    groups = (
        group(GroupKind.VERB, q.v),
        group(GroupKind.NOUN, q.n1),
        group(GroupKind.IGROUP, q.p),
        group(GroupKind.NOUN, q.n2),
    )
    target = LeftGroup(0 if q.label is Attach.VERB else 1)
    return Sentence(groups, {2: target})


# -- files -----------------------------------------------------------------


def is_quadruple_path(path: str | Path) -> bool:
    return Path(path).suffix == ".quad"


def load_corpus(path: str | Path) -> list[Sentence]:
    """Read a corpus file; ``.quad`` files go through :func:`quadruple_to_sentence`."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        if is_quadruple_path(path):
            return [quadruple_to_sentence(q) for q in read_quadruples(fh, str(path))]
        return read_sentences(fh, str(path))


def write_sentences(sentences: Iterable[Sentence], path: str | Path, header: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for s in sentences:
            fh.write(serialize_sentence(s) + "\n")
