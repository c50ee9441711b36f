"""Reverse queries: from a value back to the node:path queries yielding it.

A bottom-up chart parser runs over the value using the compiled backbone.
Categories in the chart keep their query extension symbolic: an item such as
``[Sheep, <root>^T0, {}, N0, T1]`` covers ``Sheep:<root ...>`` for every
continuation of ``T0`` allowed by its obligations, under any global
environment.  Items are stored in a canonical, alpha-renamed form and the
chart only ever grows, so saturation terminates once paths are bounded.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field

from .backbone import GLOBAL_NODE, NonTerminal, Rule, RuleSet
from .forward import EvalLimits, Query
from .matcher import Bindings, instantiate, match_nonterminal
from .paths import ConstraintSet, Path, format_constraint, format_path, is_prefix, satisfies
from .terms import NodeSlot, NodeVar, PathTerm, TailVar

TraceHook = Callable[[dict], None]

_RULE_NODE = GLOBAL_NODE.id      # N' of every rule
_RULE_PATH = 0                   # tail id of P'
_RULE_EXT = 1                    # tail id of the rule's query extension
_EXTENSION = PathTerm((), TailVar(_RULE_EXT))


def _canonicalize(bindings: Bindings, slots: Iterable) -> tuple[tuple, tuple[ConstraintSet, ...]]:
    nodes: dict[int, NodeVar] = {}
    tails: dict[int, TailVar] = {}
    obligations: list[ConstraintSet] = []
    out = []
    for slot in slots:
        if isinstance(slot, PathTerm):
            term = bindings.path(slot)
            if term.tail is not None:
                if term.tail.id not in tails:
                    tails[term.tail.id] = TailVar(len(tails))
                    obligations.append(bindings.obligations_of(term.tail))
                term = PathTerm(term.prefix, tails[term.tail.id])
            out.append(term)
        else:
            node = bindings.node(slot)
            if isinstance(node, NodeVar):
                node = nodes.setdefault(node.id, NodeVar(len(nodes)))
            out.append(node)
    return tuple(out), tuple(obligations)


def _import(bindings: Bindings, slots: tuple, obligations: tuple[ConstraintSet, ...]) -> list:
    nodes: dict[int, NodeVar] = {}
    tails: dict[int, TailVar] = {}
    out = []
    for slot in slots:
        if isinstance(slot, PathTerm):
            if slot.tail is not None:
                if slot.tail.id not in tails:
                    tails[slot.tail.id] = bindings.fresh_tail(obligations[slot.tail.id])
                slot = PathTerm(slot.prefix, tails[slot.tail.id])
        elif isinstance(slot, NodeVar):
            if slot.id not in nodes:
                nodes[slot.id] = bindings.fresh_node()
            slot = nodes[slot.id]
        out.append(slot)
    return out


def _show_slot(slot) -> str:
    if isinstance(slot, PathTerm) and slot.tail is not None:
        tail = f"P{slot.tail.id}"
        return f"{format_path(slot.prefix)}^{tail}" if slot.prefix else tail
    return str(slot)


@dataclass(frozen=True)
class Category:
    """Canonical inactive category; tails are numbered ``0..k`` with their
    obligations listed in that order."""

    node: str
    path: PathTerm
    gnode: NodeSlot
    gpath: PathTerm
    obligations: tuple[ConstraintSet, ...] = ()

    @property
    def constraint(self) -> ConstraintSet:
        if self.path.tail is None:
            return frozenset()
        return self.obligations[self.path.tail.id]

    def as_nonterminal(self) -> NonTerminal:
        return NonTerminal(self.node, self.path, self.constraint, self.gnode, self.gpath)

    def __str__(self) -> str:
        path = format_path(self.path.prefix) + ("+" if self.path.tail is not None else "")
        return (f"[{self.node}, {path}, {format_constraint(self.constraint)}, "
                f"{_show_slot(self.gnode)}, {_show_slot(self.gpath)}]")


@dataclass(frozen=True)
class InactiveItem:
    start: int
    end: int
    cat: Category

    def __str__(self) -> str:
        return f"({self.start}, {self.end}, {self.cat})"


@dataclass(frozen=True)
class ActiveItem:
    """Partial analysis: ``rule`` with ``dot`` symbols found so far.

    ``env`` holds the canonical values of the rule's global node, global
    path and query extension (the suffix).
    """

    start: int
    end: int
    rule: int
    dot: int
    env: tuple[NodeSlot, PathTerm, PathTerm]
    obligations: tuple[ConstraintSet, ...] = ()

    @property
    def suffix(self) -> PathTerm:
        return self.env[2]


Item = InactiveItem | ActiveItem


@dataclass(frozen=True, order=True)
class ReverseAnswer:
    node: str
    path: Path
    open_extension: bool
    forbidden: ConstraintSet = frozenset()

    def sort_key(self) -> tuple:
        return (self.node, len(self.path), self.path, not self.open_extension, sorted(self.forbidden))

    def __str__(self) -> str:
        text = f"{self.node}:{format_path(self.path)}"
        if self.open_extension:
            text += "+…"
            if self.forbidden:
                text += " !" + format_constraint(self.forbidden)
        return text

    def as_json(self) -> dict:
        return {
            "node": self.node,
            "path": list(self.path),
            "open_extension": self.open_extension,
            "forbidden": [list(p) for p in sorted(self.forbidden)],
        }


@dataclass
class Chart:
    size: int
    inactive_by_start: dict[int, list[InactiveItem]] = field(default_factory=dict)
    inactive_by_end_node: dict[tuple[int, str], list[InactiveItem]] = field(default_factory=dict)
    active_by_end: dict[int, list[ActiveItem]] = field(default_factory=dict)
    items: dict[Item, tuple] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, item: Item) -> bool:
        return item in self.items

    def add(self, item: Item, derivation: tuple) -> bool:
        if item in self.items:
            return False
        self.items[item] = derivation
        if isinstance(item, InactiveItem):
            self.inactive_by_start.setdefault(item.start, []).append(item)
            self.inactive_by_end_node.setdefault((item.end, item.cat.node), []).append(item)
        else:
            self.active_by_end.setdefault(item.end, []).append(item)
        return True

    @property
    def inactive(self) -> list[InactiveItem]:
        return [i for i in self.items if isinstance(i, InactiveItem)]

    @property
    def active(self) -> list[ActiveItem]:
        return [i for i in self.items if isinstance(i, ActiveItem)]

    def derivation(self, item: Item) -> tuple:
        return self.items[item]

    def leaves(self, item: InactiveItem) -> list[str]:
        """Terminal yield of the first recorded derivation of ``item``."""
        out: list[str] = []
        for child in self.items[item][1]:
            if isinstance(child, str):
                out.append(child)
            else:
                out.extend(self.leaves(child))
        return out


@dataclass
class ReverseResult:
    answers: tuple[ReverseAnswer, ...]
    chart: Chart
    suppressed: int = 0
    diagnostics: list[str] = field(default_factory=list)


class ChartParser:
    """One reverse query: saturates a chart over ``value``."""

    def __init__(self, rules: RuleSet, value: Iterable[str], limits: EvalLimits | None = None,
                 trace: TraceHook | None = None):
        self.rules = rules
        self.value = tuple(value)
        self.limits = limits or EvalLimits()
        self.trace = trace
        self.chart = Chart(len(self.value))
        self.agenda: deque[Item] = deque()
        self.suppressed = 0

    # -- helpers ---------------------------------------------------------

    def _emit(self, proc: str, **record) -> None:
        if self.trace is not None:
            record = {"proc": proc, **record, "chart_size": len(self.chart)}
            self.trace(record)

    def _rule_context(self, rule: Rule, env: ActiveItem | None) -> Bindings:
        """Bindings in which the rule's own variables carry the current env."""
        b = Bindings(next_id=_RULE_EXT)
        if env is None:
            b.constrain(TailVar(_RULE_EXT), rule.lhs.constraint)
            return b
        gnode, gpath, ext = _import(b, env.env, env.obligations)
        b.nodes[_RULE_NODE] = gnode
        b.tails[_RULE_PATH] = gpath
        b.tails[_RULE_EXT] = ext
        return b

    def _item_nonterminal(self, b: Bindings, item: InactiveItem) -> NonTerminal:
        cat = item.cat
        node, path, gnode, gpath = _import(b, (cat.node, cat.path, cat.gnode, cat.gpath), cat.obligations)
        return NonTerminal(node, path, cat.constraint, gnode, gpath)

    # -- procedures ------------------------------------------------------

    def parse(self, vertex: int = 0, remaining: tuple[str, ...] | None = None) -> Chart:
        if remaining is None:
            remaining = self.value[vertex:]
        while remaining:
            nxt = vertex + 1
            self.add_epsilon(vertex)
            self.reduce(vertex, remaining[0], nxt)
            self.complete(vertex, remaining[0], nxt)
            self.drain()
            vertex, remaining = nxt, remaining[1:]
        self.add_epsilon(vertex)
        self.drain()
        return self.chart

    def add_epsilon(self, vertex: int) -> None:
        for index in self.rules.epsilon_rules:
            self._emit("add_epsilon", span=[vertex, vertex], rule=index)
            b = self._rule_context(self.rules.rules[index], None)
            self.add_item(vertex, vertex, index, 0, b, ())

    def reduce(self, v1: int, cat: str | InactiveItem, v2: int) -> None:
        if isinstance(cat, str):
            for index in self.rules.by_terminal.get(cat, ()):
                self._emit("reduce", span=[v1, v2], rule=index, item=cat)
                b = self._rule_context(self.rules.rules[index], None)
                self.add_item(v1, v2, index, 1, b, (cat,))
            return
        for index in self.rules.candidates(cat.cat.node):
            rule = self.rules.rules[index]
            b = self._rule_context(rule, None)
            result = match_nonterminal(rule.rhs[0], self._item_nonterminal(b, cat), b, _EXTENSION)
            if result is None:
                continue
            self._emit("reduce", span=[v1, v2], rule=index, item=str(cat.cat), case=result.case,
                       suffix=str(result.suffix), constraint=format_constraint(result.constraint))
            self.add_item(v1, v2, index, 1, result.bindings, (cat,))

    def complete(self, v1: int, cat: str | InactiveItem, v2: int) -> None:
        for active in list(self.chart.active_by_end.get(v1, ())):
            self._advance(active, cat, v2)

    def _advance(self, active: ActiveItem, cat: str | InactiveItem, v2: int) -> None:
        rule = self.rules.rules[active.rule]
        pending = rule.rhs[active.dot]
        children = self.chart.derivation(active)[1]
        b = self._rule_context(rule, active)
        if isinstance(cat, str) or isinstance(pending, str):
            if cat != pending:
                return
            self._emit("complete", span=[active.start, v2], rule=active.rule, item=cat)
            self.add_item(active.start, v2, active.rule, active.dot + 1, b, children + (cat,))
            return
        result = match_nonterminal(pending, self._item_nonterminal(b, cat), b, _EXTENSION)
        if result is None:
            return
        self._emit("complete", span=[active.start, v2], rule=active.rule, item=str(cat.cat),
                   case=result.case, suffix=str(result.suffix),
                   constraint=format_constraint(result.constraint))
        self.add_item(active.start, v2, active.rule, active.dot + 1, result.bindings, children + (cat,))

    def add_item(self, v1: int, v2: int, index: int, dot: int, b: Bindings, children: tuple) -> None:
        rule = self.rules.rules[index]
        limit = self.limits.max_path_len
        if dot == len(rule.rhs):
            lhs = instantiate(rule.lhs, _EXTENSION)
            slots, obligations = _canonicalize(b, (lhs.node, lhs.path, lhs.gnode, lhs.gpath))
            node, path, gnode, gpath = slots
            if len(path.prefix) > limit or len(gpath.prefix) > limit:
                self.suppressed += 1
                self._emit("suppress", span=[v1, v2], rule=index, path=format_path(path.prefix))
                return
            item: Item = InactiveItem(v1, v2, Category(node, path, gnode, gpath, obligations))
        else:
            env, obligations = _canonicalize(b, (GLOBAL_NODE, PathTerm((), TailVar(_RULE_PATH)), _EXTENSION))
            if len(rule.lhs.path.prefix) + len(env[2].prefix) > limit or len(env[1].prefix) > limit:
                self.suppressed += 1
                self._emit("suppress", span=[v1, v2], rule=index)
                return
            item = ActiveItem(v1, v2, index, dot, env, obligations)
        if self.chart.add(item, (index, children)):
            self._emit("add_item", span=[v1, v2], rule=index,
                       item=str(item.cat) if isinstance(item, InactiveItem) else f"dot {dot}")
            self.agenda.append(item)

    def drain(self) -> None:
        while self.agenda:
            item = self.agenda.popleft()
            if isinstance(item, InactiveItem):
                self.reduce(item.start, item, item.end)
                self.complete(item.start, item, item.end)
                continue
            pending = self.rules.rules[item.rule].rhs[item.dot]
            if isinstance(pending, str):
                if item.end < len(self.value) and self.value[item.end] == pending:
                    self._advance(item, pending, item.end + 1)
                continue
            for inactive in list(self.chart.inactive_by_start.get(item.end, ())):
                if isinstance(pending.node, str) and pending.node != inactive.cat.node:
                    continue
                self._advance(item, inactive, inactive.end)


def _start_symbol(cat: Category) -> ReverseAnswer | None:
    b = Bindings()
    node, path, gnode, gpath = _import(b, (cat.node, cat.path, cat.gnode, cat.gpath), cat.obligations)
    if not (b.unify_nodes(gnode, node) and b.unify_paths(gpath, path)):
        return None
    path = b.path(path)
    forbidden = b.obligations_of(path.tail) if path.tail is not None else frozenset()
    return ReverseAnswer(cat.node, path.prefix, path.tail is not None, forbidden)


def _covers(general: ReverseAnswer, specific: ReverseAnswer) -> bool:
    """Whether every query in ``specific``'s expansion is in ``general``'s."""
    if general.node != specific.node or not is_prefix(general.path, specific.path):
        return False
    rest = specific.path[len(general.path):]
    if not general.open_extension:
        return not rest and not specific.open_extension
    if not satisfies(rest, general.forbidden):
        return False
    if not specific.open_extension:
        return True
    # Every continuation the specific answer admits must be admitted here.
    leftover = {c[len(rest):] for c in general.forbidden if is_prefix(rest, c)}
    return all(any(is_prefix(f, c) for f in specific.forbidden) for c in leftover)


def minimize(answers: Iterable[ReverseAnswer]) -> tuple[ReverseAnswer, ...]:
    answers = sorted(set(answers), key=ReverseAnswer.sort_key)
    kept: list[ReverseAnswer] = []
    for a in answers:
        if not any(_covers(other, a) for other in answers if other != a and
                   not (_covers(a, other) and other.sort_key() > a.sort_key())):
            kept.append(a)
    return tuple(kept)


def extract_answers(chart: Chart, length: int | None = None) -> tuple[ReverseAnswer, ...]:
    length = chart.size if length is None else length
    found = []
    for item in chart.inactive_by_start.get(0, ()):
        if item.end == length and (answer := _start_symbol(item.cat)) is not None:
            found.append(answer)
    return minimize(found)


def reverse_query(rules: RuleSet, value: Iterable[str], limits: EvalLimits | None = None,
                  trace: TraceHook | None = None) -> ReverseResult:
    """All queries whose value is ``value``, as answer families."""
    value = tuple(value)
    unknown = [a for a in value if a not in rules.terminals]
    parser = ChartParser(rules, value, limits, trace)
    if unknown:
        return ReverseResult((), parser.chart, 0,
                             [f"unknown atom {a!r}: not a terminal of the theory" for a in dict.fromkeys(unknown)])
    parser.parse(0, value)
    answers = extract_answers(parser.chart, len(value))
    diagnostics = []
    if parser.suppressed:
        diagnostics.append(f"ExhaustedBudget: {parser.suppressed} items exceeded the path length "
                           f"limit of {parser.limits.max_path_len}")
    return ReverseResult(answers, parser.chart, parser.suppressed, diagnostics)


def _extensions(alphabet: tuple[str, ...], max_len: int) -> Iterator[Path]:
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def expand_answer(answer: ReverseAnswer, alphabet: Iterable[str], max_len: int) -> set[Query]:
    """Concrete queries of an answer family with paths up to ``max_len``."""
    if not answer.open_extension:
        return {Query(answer.node, answer.path)} if len(answer.path) <= max_len else set()
    alphabet = tuple(sorted(set(alphabet)))
    room = max_len - len(answer.path)
    return {Query(answer.node, answer.path + e)
            for e in _extensions(alphabet, room) if satisfies(e, answer.forbidden)}
