"""Reading, printing and checking DATR theories.

Only the fully spelled-out notation is accepted::

    Noun:
        <orth> == "<root>" "<affix>"
        <affix sing> ==
        <affix plur> == s.

A node header is followed by one or more equations and the block ends with
``.``.  A ``.`` may also close each equation, in which case a following
equation that starts with ``<`` continues under the same node.  Node names
start with an uppercase letter; atoms start with a lowercase letter, a digit
or an underscore.  Comments run from ``%`` to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .errors import (
    DatrSyntaxError,
    DuplicateLhs,
    EvaluablePathUnsupported,
    IllegalCharacter,
)
from .paths import Path, format_path, is_prefix


class Tok(Enum):
    NODE = "node"
    ATOM = "atom"
    COLON = ":"
    LANGLE = "<"
    RANGLE = ">"
    DEFINE = "=="
    QUOTE = '"'
    DOT = "."
    LPAREN = "("
    RPAREN = ")"


@dataclass(frozen=True)
class Token:
    kind: Tok
    text: str
    line: int
    column: int

    def __repr__(self) -> str:
        if self.kind in (Tok.NODE, Tok.ATOM):
            return f"{self.kind.value} {self.text!r}"
        return repr(self.text)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<define>==)
  | (?P<node>[A-Z][A-Za-z0-9_]*)
  | (?P<atom>[a-z0-9_][A-Za-z0-9_'\-]*)
  | (?P<punct>[:<>".()])
    """,
    re.VERBOSE,
)

_PUNCT = {":": Tok.COLON, "<": Tok.LANGLE, ">": Tok.RANGLE, '"': Tok.QUOTE,
          ".": Tok.DOT, "(": Tok.LPAREN, ")": Tok.RPAREN}


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        column = pos - line_start + 1
        if m is None:
            ch = source[pos]
            if ch == "#":
                raise IllegalCharacter("DATR declarations (#...) are not supported", line, column)
            if ch == "$":
                raise IllegalCharacter("DATR variables ($...) are not supported", line, column)
            raise IllegalCharacter(f"illegal character {ch!r}", line, column)
        kind = m.lastgroup
        text = m.group()
        if kind == "define":
            tokens.append(Token(Tok.DEFINE, text, line, column))
        elif kind == "node":
            tokens.append(Token(Tok.NODE, text, line, column))
        elif kind == "atom":
            tokens.append(Token(Tok.ATOM, text, line, column))
        elif kind == "punct":
            tokens.append(Token(_PUNCT[text], text, line, column))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    return tokens


class Kind(Enum):
    EMPTY = "EmptyValue"
    ATOM = "AtomValue"
    LOCAL_NODE_PATH = "LocalNodePath"
    LOCAL_NODE = "LocalNode"
    LOCAL_PATH = "LocalPath"
    GLOBAL_NODE_PATH = "GlobalNodePath"
    GLOBAL_NODE = "GlobalNode"
    GLOBAL_PATH = "GlobalPath"

    @property
    def quoted(self) -> bool:
        return self in (Kind.GLOBAL_NODE_PATH, Kind.GLOBAL_NODE, Kind.GLOBAL_PATH)


@dataclass(frozen=True)
class Descriptor:
    kind: Kind
    atom: str | None = None
    node: str | None = None
    path: Path | None = None

    def __str__(self) -> str:
        k = self.kind
        if k is Kind.EMPTY:
            return "()"
        if k is Kind.ATOM:
            return self.atom
        if k in (Kind.LOCAL_NODE_PATH, Kind.GLOBAL_NODE_PATH):
            text = f"{self.node}:{format_path(self.path)}"
        elif k in (Kind.LOCAL_NODE, Kind.GLOBAL_NODE):
            text = self.node
        else:
            text = format_path(self.path)
        return f'"{text}"' if k.quoted else text


def empty_value() -> Descriptor:
    return Descriptor(Kind.EMPTY)


def atom_value(atom: str) -> Descriptor:
    return Descriptor(Kind.ATOM, atom=atom)


@dataclass(frozen=True)
class Sentence:
    node: str
    path: Path
    rhs: tuple[Descriptor, ...]

    def __str__(self) -> str:
        body = " ".join(str(d) for d in self.rhs if d.kind is not Kind.EMPTY)
        return f"{self.node}:{format_path(self.path)} ==" + (f" {body}" if body else "") + "."


@dataclass(frozen=True)
class Theory:
    sentences: tuple[Sentence, ...]

    @cached_property
    def node_index(self) -> dict[str, frozenset[Path]]:
        index: dict[str, set[Path]] = {}
        for s in self.sentences:
            index.setdefault(s.node, set()).add(s.path)
        return {node: frozenset(paths) for node, paths in index.items()}

    @cached_property
    def nodes(self) -> tuple[str, ...]:
        """Defined nodes in order of first definition."""
        return tuple(dict.fromkeys(s.node for s in self.sentences))

    @cached_property
    def _by_lhs(self) -> dict[tuple[str, Path], Sentence]:
        return {(s.node, s.path): s for s in self.sentences}

    def sentence(self, node: str, path: Path) -> Sentence | None:
        return self._by_lhs.get((node, path))

    @cached_property
    def terminals(self) -> frozenset[str]:
        return frozenset(d.atom for s in self.sentences for d in s.rhs if d.kind is Kind.ATOM)

    @cached_property
    def attributes(self) -> tuple[str, ...]:
        """Sorted atoms occurring inside any path, on either side."""
        attrs: set[str] = set()
        for s in self.sentences:
            attrs.update(s.path)
            for d in s.rhs:
                if d.path:
                    attrs.update(d.path)
        return tuple(sorted(attrs))


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, kind: Tok, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind is kind

    def error(self, expected: str, cls=DatrSyntaxError):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            line, col = (last.line, last.column + len(last.text)) if last else (1, 1)
            return cls(f"expected {expected}, found end of input", line, col)
        return cls(f"expected {expected}, found {tok.text!r}", tok.line, tok.column)

    def expect(self, kind: Tok, expected: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind is not kind:
            raise self.error(expected)
        self.pos += 1
        return tok

    def theory(self) -> Theory:
        sentences: list[Sentence] = []
        seen: set[tuple[str, Path]] = set()
        while self.peek() is not None:
            header = self.expect(Tok.NODE, "a node name")
            self.expect(Tok.COLON, "':' after node name")
            node = header.text
            while True:
                start = self.peek()
                path = self.path()
                self.expect(Tok.DEFINE, "'=='")
                rhs = self.rhs()
                if (node, path) in seen:
                    raise DuplicateLhs(node, path, start.line, start.column)
                seen.add((node, path))
                sentences.append(Sentence(node, path, rhs))
                if self.at(Tok.LANGLE):
                    continue
                self.expect(Tok.DOT, "'.' or another equation")
                # Per-equation terminators: a following path keeps the node.
                if not self.at(Tok.LANGLE):
                    break
        return Theory(tuple(sentences))

    def path(self) -> Path:
        self.expect(Tok.LANGLE, "'<'")
        attrs: list[str] = []
        while not self.at(Tok.RANGLE):
            tok = self.peek()
            if tok is None:
                raise self.error("'>'")
            if tok.kind in (Tok.QUOTE, Tok.NODE, Tok.LANGLE):
                raise EvaluablePathUnsupported(
                    "evaluable paths (descriptors inside a path) are not supported",
                    tok.line, tok.column)
            if tok.kind is not Tok.ATOM:
                raise self.error("an attribute atom or '>'")
            attrs.append(tok.text)
            self.pos += 1
        self.pos += 1
        return tuple(attrs)

    def starts_equation(self) -> bool:
        # '<' ... '>' '==' begins the next equation rather than a descriptor.
        if not self.at(Tok.LANGLE):
            return False
        i = 1
        while (tok := self.peek(i)) is not None and tok.kind is Tok.ATOM:
            i += 1
        return self.at(Tok.RANGLE, i) and self.at(Tok.DEFINE, i + 1)

    def rhs(self) -> tuple[Descriptor, ...]:
        items: list[Descriptor] = []
        while True:
            tok = self.peek()
            if tok is None or tok.kind is Tok.DOT or self.starts_equation():
                return tuple(items)
            if tok.kind is Tok.ATOM:
                self.pos += 1
                items.append(atom_value(tok.text))
            elif tok.kind is Tok.LPAREN:
                self.pos += 1
                self.expect(Tok.RPAREN, "')' closing the empty value")
                items.append(empty_value())
            elif tok.kind is Tok.QUOTE:
                self.pos += 1
                items.append(self.inheritance(quoted=True))
                self.expect(Tok.QUOTE, "closing '\"'")
            elif tok.kind in (Tok.NODE, Tok.LANGLE):
                items.append(self.inheritance(quoted=False))
            else:
                raise self.error("a descriptor, '.' or another equation")

    def inheritance(self, quoted: bool) -> Descriptor:
        if self.at(Tok.LANGLE):
            kind = Kind.GLOBAL_PATH if quoted else Kind.LOCAL_PATH
            return Descriptor(kind, path=self.path())
        node = self.expect(Tok.NODE, "a node name or path").text
        if self.at(Tok.COLON) and self.at(Tok.LANGLE, 1):
            self.pos += 1
            kind = Kind.GLOBAL_NODE_PATH if quoted else Kind.LOCAL_NODE_PATH
            return Descriptor(kind, node=node, path=self.path())
        if self.at(Tok.COLON):
            raise self.error("a node name or path", DatrSyntaxError)
        return Descriptor(Kind.GLOBAL_NODE if quoted else Kind.LOCAL_NODE, node=node)


def parse_theory(source: str | list[Token]) -> Theory:
    """Parse DATR source text (or a token list from :func:`tokenize`)."""
    tokens = tokenize(source) if isinstance(source, str) else list(source)
    return _Parser(tokens).theory()


def format_theory(theory: Theory) -> str:
    """Print a theory in block layout; the output parses back to an equal theory."""
    lines: list[str] = []
    runs: list[list[Sentence]] = []
    for s in theory.sentences:
        if runs and runs[-1][0].node == s.node:
            runs[-1].append(s)
        else:
            runs.append([s])
    for run in runs:
        lines.append(f"{run[0].node}:")
        for i, s in enumerate(run):
            body = " ".join(str(d) for d in s.rhs)
            end = "." if i == len(run) - 1 else ""
            lines.append(f"    {format_path(s.path)} ==" + (f" {body}" if body else "") + end)
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    node: str | None = None

    def __str__(self) -> str:
        return f"warning: {self.code}: {self.message}"


def _references(d: Descriptor, node: str, lhs: Path) -> tuple[str | None, Path | None]:
    """The (node, path) a descriptor inherits from; None marks a global slot."""
    k = d.kind
    if k is Kind.LOCAL_NODE_PATH or k is Kind.GLOBAL_NODE_PATH:
        return d.node, d.path
    if k is Kind.LOCAL_NODE:
        return d.node, lhs
    if k is Kind.LOCAL_PATH:
        return node, d.path
    if k is Kind.GLOBAL_NODE:
        return d.node, None
    if k is Kind.GLOBAL_PATH:
        return None, d.path
    return None, None


def validate_theory(theory: Theory) -> list[Diagnostic]:
    """Warnings about a parsed theory; the theory itself is left untouched."""
    diagnostics: list[Diagnostic] = []
    index = theory.node_index

    undefined: dict[str, None] = {}
    for s in theory.sentences:
        for d in s.rhs:
            target, path = _references(d, s.node, s.path)
            if target is None:
                continue
            if target not in index:
                undefined.setdefault(target)
                continue
            if path is not None and not any(
                    is_prefix(p, path) or is_prefix(path, p) for p in index[target]):
                diagnostics.append(Diagnostic(
                    "UnresolvablePath",
                    f"{s.node}:{format_path(s.path)} refers to {target}:{format_path(path)}, "
                    f"which no extension can resolve", s.node))
    for target in undefined:
        diagnostics.append(Diagnostic("UndefinedNode", f"node {target} is referenced but never defined", target))

    # A node is grounded once one of its sentences can finish without an
    # ungrounded node; global-node lookups are assumed to ground.
    grounded: set[str] = set()
    changed = True
    while changed:
        changed = False
        for s in theory.sentences:
            if s.node not in grounded and all(
                    t is None or t in grounded
                    for t in (_references(d, s.node, s.path)[0] for d in s.rhs)):
                grounded.add(s.node)
                changed = True
    for node in theory.nodes:
        if node in grounded:
            continue
        targets = {_references(d, s.node, s.path)[0]
                   for s in theory.sentences if s.node == node for d in s.rhs}
        if targets <= set(index) | {None}:
            diagnostics.append(Diagnostic(
                "NonTerminationRisk",
                f"every definition at {node} recurses without reaching a value", node))
    return diagnostics
