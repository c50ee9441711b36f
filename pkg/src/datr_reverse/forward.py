"""Standard (forward) DATR evaluation of node:path queries.

Every query is evaluated in a global environment, initially the query
itself.  A sentence applies when its path is the longest defined prefix of
the query path; the remainder (the extension) is appended to the paths of
the descriptors on its right-hand side.  Quoted descriptors also reset the
global environment.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Callable, Iterator
from dataclasses import dataclass

from .errors import DatrSyntaxError, LimitExceeded, Undefined
from .paths import Path, format_path
from .syntax import Kind, Sentence, Theory

DEFAULT_MAX_PATH_LEN = 10
DEFAULT_MAX_DEPTH = 50


@dataclass(frozen=True)
class EvalLimits:
    max_path_len: int = DEFAULT_MAX_PATH_LEN
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self):
        if self.max_path_len < 1 or self.max_depth < 1:
            raise ValueError("evaluation limits must be at least 1")


@dataclass(frozen=True, order=True)
class Query:
    node: str
    path: Path

    def __str__(self) -> str:
        return f"{self.node}:{format_path(self.path)}"


_QUERY_RE = re.compile(r"^\s*([A-Z][A-Za-z0-9_]*)\s*:\s*<([^<>]*)>\s*$")


def parse_query(text: str) -> Query:
    m = _QUERY_RE.match(text)
    if m is None:
        raise DatrSyntaxError(f"malformed query {text!r}; expected Node:<a1 a2 ...>")
    return Query(m.group(1), tuple(m.group(2).split()))


def lookup_sentence(theory: Theory, node: str, path: Path) -> tuple[Sentence, Path] | None:
    """The sentence whose path is the longest prefix of ``path`` at ``node``,
    with the leftover extension; ``None`` when nothing applies."""
    paths = theory.node_index.get(node)
    if not paths:
        return None
    for n in range(len(path), -1, -1):
        if path[:n] in paths:
            return theory.sentence(node, path[:n]), path[n:]
    return None


def eval_query(theory: Theory, query: Query, limits: EvalLimits | None = None,
               trace: Callable[[dict], None] | None = None) -> tuple[str, ...]:
    """Value of ``query``.

    Raises :class:`Undefined` when some lookup fails and
    :class:`LimitExceeded` when the path length or recursion depth bound is
    crossed, so that cycles are never mistaken for ordinary failure.
    """
    limits = limits or EvalLimits()

    def evaluate(node: str, path: Path, gnode: str, gpath: Path, depth: int) -> list[str]:
        if depth > limits.max_depth:
            raise LimitExceeded(f"recursion depth exceeded {limits.max_depth} at {node}:{format_path(path)}")
        if len(path) > limits.max_path_len or len(gpath) > limits.max_path_len:
            raise LimitExceeded(f"path length exceeded {limits.max_path_len} at {node}:{format_path(path)}")
        found = lookup_sentence(theory, node, path)
        if trace is not None:
            trace({"proc": "lookup", "query": f"{node}:{format_path(path)}",
                   "global": f"{gnode}:{format_path(gpath)}", "depth": depth,
                   "sentence": str(found[0]) if found else None})
        if found is None:
            raise Undefined(node, path)
        sentence, ext = found
        value: list[str] = []
        for d in sentence.rhs:
            k = d.kind
            if k is Kind.ATOM:
                value.append(d.atom)
            elif k is Kind.EMPTY:
                continue
            elif k is Kind.LOCAL_PATH:
                value += evaluate(node, d.path + ext, gnode, gpath, depth + 1)
            elif k is Kind.LOCAL_NODE:
                value += evaluate(d.node, path, gnode, gpath, depth + 1)
            elif k is Kind.LOCAL_NODE_PATH:
                value += evaluate(d.node, d.path + ext, gnode, gpath, depth + 1)
            elif k is Kind.GLOBAL_NODE_PATH:
                p = d.path + ext
                value += evaluate(d.node, p, d.node, p, depth + 1)
            elif k is Kind.GLOBAL_NODE:
                # The global path is already a whole query path; no extension.
                value += evaluate(d.node, gpath, d.node, gpath, depth + 1)
            else:
                p = d.path + ext
                value += evaluate(gnode, p, gnode, p, depth + 1)
        return value

    return tuple(evaluate(query.node, query.path, query.node, query.path, 0))


def enumerate_queries(theory: Theory, max_path_len: int) -> Iterator[Query]:
    """Every query over the theory's nodes and attribute alphabet, shortest
    paths first."""
    alphabet = theory.attributes
    for node in theory.nodes:
        for n in range(max_path_len + 1):
            for path in itertools.product(alphabet, repeat=n):
                yield Query(node, path)

