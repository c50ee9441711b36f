"""Matching of right-hand-side categories against derived categories.

Matching is unification over three kinds of variable: node variables, and
tail variables that stand for an unknown continuation of a path.  A tail
carries *obligations*, a constraint set its eventual value must satisfy.
Binding a tail ``T`` with obligations ``O`` to ``D^U`` is allowed only if no
member of ``O`` is a prefix of ``D``; the members that extend ``D`` pass on to
``U`` as ``σ(D, O)``.  With that single rule, the suffix/constraint
bookkeeping of terminal, nonterminal and sequence matching falls out of
ordinary most-general unification, since equations between terms with at
most one tail per side always have a unique most general solution.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .backbone import NonTerminal
from .paths import ConstraintSet, Path, is_prefix, residual, strip_empty, suffix_set
from .terms import NodeSlot, NodeVar, PathTerm, TailVar

Suffix = PathTerm


class Bindings:
    """Mutable substitution for node and tail variables.

    Callers that may need to back out of a failed unification work on a
    :meth:`copy`.
    """

    __slots__ = ("nodes", "tails", "obligations", "next_id")

    def __init__(self, next_id: int = 0):
        self.nodes: dict[int, NodeSlot] = {}
        self.tails: dict[int, PathTerm] = {}
        self.obligations: dict[int, ConstraintSet] = {}
        self.next_id = next_id

    def copy(self) -> Bindings:
        other = Bindings(self.next_id)
        other.nodes = dict(self.nodes)
        other.tails = dict(self.tails)
        other.obligations = dict(self.obligations)
        return other

    def fresh_node(self) -> NodeVar:
        self.next_id += 1
        return NodeVar(self.next_id)

    def fresh_tail(self, obligations: ConstraintSet = frozenset()) -> TailVar:
        self.next_id += 1
        tail = TailVar(self.next_id)
        if obligations:
            self.obligations[tail.id] = frozenset(obligations)
        return tail

    def reserve(self, *slots) -> None:
        """Keep fresh ids clear of variables already used in ``slots``."""
        for slot in slots:
            if isinstance(slot, NodeVar):
                self.next_id = max(self.next_id, slot.id)
            elif isinstance(slot, PathTerm) and slot.tail is not None:
                self.next_id = max(self.next_id, slot.tail.id)
            elif isinstance(slot, TailVar):
                self.next_id = max(self.next_id, slot.id)

    def node(self, slot: NodeSlot) -> NodeSlot:
        while isinstance(slot, NodeVar) and slot.id in self.nodes:
            slot = self.nodes[slot.id]
        return slot

    def path(self, term: PathTerm) -> PathTerm:
        prefix = term.prefix
        tail = term.tail
        while tail is not None and tail.id in self.tails:
            bound = self.tails[tail.id]
            prefix += bound.prefix
            tail = bound.tail
        if tail is term.tail:
            return term
        return PathTerm(prefix, tail)

    def obligations_of(self, tail: TailVar | None) -> ConstraintSet:
        if tail is None:
            return frozenset()
        return self.obligations.get(tail.id, frozenset())

    def constrain(self, tail: TailVar, extra: ConstraintSet) -> None:
        extra = strip_empty(extra)
        if extra:
            self.obligations[tail.id] = self.obligations_of(tail) | extra

    def unify_nodes(self, a: NodeSlot, b: NodeSlot) -> bool:
        a, b = self.node(a), self.node(b)
        if a == b:
            return True
        if isinstance(a, NodeVar):
            self.nodes[a.id] = b
            return True
        if isinstance(b, NodeVar):
            self.nodes[b.id] = a
            return True
        return False

    def _bind_tail(self, tail: TailVar, value: PathTerm) -> bool:
        obligations = self.obligations.pop(tail.id, frozenset())
        if value.tail is None:
            if not all(not is_prefix(c, value.prefix) for c in obligations):
                return False
        else:
            passed = residual(value.prefix, obligations)
            if passed is None:
                return False
            self.constrain(value.tail, passed)
        self.tails[tail.id] = value
        return True

    def unify_paths(self, a: PathTerm, b: PathTerm) -> bool:
        a, b = self.path(a), self.path(b)
        if len(a.prefix) > len(b.prefix):
            a, b = b, a
        if b.prefix[: len(a.prefix)] != a.prefix:
            return False
        rest = b.prefix[len(a.prefix):]
        if a.tail is None:
            if rest:
                return False
            if b.tail is None:
                return True
            return self._bind_tail(b.tail, PathTerm(()))
        if a.tail == b.tail:
            return not rest
        return self._bind_tail(a.tail, PathTerm(rest, b.tail))


@dataclass(frozen=True)
class MatchResult:
    """Outcome of a successful match.

    ``suffix`` is the extension the rule-side category acquires (open when
    it may continue further); ``constraint`` is the constraint the matching
    rules assign; ``case`` records which nonterminal case applied (1: the
    derived path extends the rule path, 2: the reverse, 0: terminals).
    """

    suffix: Suffix
    constraint: ConstraintSet
    bindings: Bindings
    case: int = 0


def match_terminal(t1: str, t2: str, bindings: Bindings | None = None) -> MatchResult | None:
    if t1 != t2:
        return None
    bindings = bindings.copy() if bindings is not None else Bindings()
    return MatchResult(PathTerm((), bindings.fresh_tail()), frozenset(), bindings)


def _extend(term: PathTerm, extension: PathTerm) -> PathTerm:
    if term.tail is not None:
        return term
    return PathTerm(term.prefix + extension.prefix, extension.tail)


def instantiate(nt: NonTerminal, extension: PathTerm) -> NonTerminal:
    """Append the rule's query extension to every concrete path slot."""
    return NonTerminal(nt.node, _extend(nt.path, extension), nt.constraint,
                       nt.gnode, _extend(nt.gpath, extension))


def _prepare(rule_nt: NonTerminal, item_nt: NonTerminal, bindings: Bindings | None,
             extension: PathTerm | None) -> tuple[Bindings, PathTerm]:
    if bindings is None:
        bindings = Bindings()
        bindings.reserve(rule_nt.node, rule_nt.gnode, rule_nt.path, rule_nt.gpath,
                         item_nt.node, item_nt.gnode, item_nt.path, item_nt.gpath)
        if item_nt.path.tail is not None:
            bindings.constrain(item_nt.path.tail, item_nt.constraint)
    else:
        bindings = bindings.copy()
    if extension is None:
        extension = PathTerm((), bindings.fresh_tail(rule_nt.constraint))
    return bindings, extension


def match_nonterminal(rule_nt: NonTerminal, item_nt: NonTerminal,
                      bindings: Bindings | None = None,
                      extension: PathTerm | None = None) -> MatchResult | None:
    """Match a rule-side category against a derived category.

    ``rule_nt`` is written without its query extension; ``extension`` is the
    term standing for it (a fresh tail constrained by ``rule_nt.constraint``
    when omitted).  A derived path without a tail is taken literally.
    """
    bindings, extension = _prepare(rule_nt, item_nt, bindings, extension)
    rule_path = bindings.path(rule_nt.path)
    item_path = bindings.path(item_nt.path)
    item_constraint = (bindings.obligations_of(item_path.tail)
                       if item_path.tail is not None else item_nt.constraint)

    if rule_path.tail is None and not is_prefix(rule_path.prefix, item_path.prefix):
        # The rule path is the longer one: case 2 needs P1 = P2^E.
        if item_path.tail is None or not is_prefix(item_path.prefix, rule_path.prefix):
            return None
        case = 2
        rest = rule_path.prefix[len(item_path.prefix):]
        constraint = strip_empty(suffix_set(rest, item_constraint))
    else:
        case = 1
        constraint = item_constraint

    inst = instantiate(rule_nt, extension)
    if not (bindings.unify_nodes(inst.node, item_nt.node)
            and bindings.unify_nodes(inst.gnode, item_nt.gnode)
            and bindings.unify_paths(inst.path, item_nt.path)
            and bindings.unify_paths(inst.gpath, item_nt.gpath)):
        return None
    return MatchResult(bindings.path(extension), frozenset(constraint), bindings, case)


def match_sequence(rule_seq: Sequence[NonTerminal | str], item_seq: Sequence[NonTerminal | str],
                   bindings: Bindings | None = None) -> MatchResult | None:
    """Match two symbol sequences under one shared suffix.

    The resulting constraint is the union of the per-symbol constraints.
    """
    if len(rule_seq) != len(item_seq):
        return None
    if bindings is None:
        bindings = Bindings()
        for r, i in zip(rule_seq, item_seq):
            for nt in (r, i):
                if isinstance(nt, NonTerminal):
                    bindings.reserve(nt.node, nt.gnode, nt.path, nt.gpath)
            if isinstance(i, NonTerminal) and i.path.tail is not None:
                bindings.constrain(i.path.tail, i.constraint)
    else:
        bindings = bindings.copy()
    rule_constraints = frozenset().union(*(r.constraint for r in rule_seq if isinstance(r, NonTerminal)))
    extension = PathTerm((), bindings.fresh_tail(rule_constraints))
    constraint: ConstraintSet = frozenset()
    for r, i in zip(rule_seq, item_seq):
        if isinstance(r, str) or isinstance(i, str):
            if r != i:
                return None
            continue
        result = match_nonterminal(r, i, bindings, extension)
        if result is None:
            return None
        bindings = result.bindings
        constraint |= result.constraint
    return MatchResult(bindings.path(extension), constraint, bindings, 0)


def unify_suffix(s1: Suffix, s2: Suffix, bindings: Bindings | None = None) -> tuple[Suffix, Bindings] | None:
    bindings = bindings.copy() if bindings is not None else Bindings()
    bindings.reserve(s1, s2)
    if not bindings.unify_paths(s1, s2):
        return None
    return bindings.path(s1), bindings


def resolve_nonterminal(nt: NonTerminal, bindings: Bindings) -> NonTerminal:
    path = bindings.path(nt.path)
    constraint = bindings.obligations_of(path.tail) if path.tail is not None else nt.constraint
    return NonTerminal(bindings.node(nt.node), path, constraint,
                       bindings.node(nt.gnode), bindings.path(nt.gpath))


def closed_path(term: PathTerm) -> Path:
    return term.prefix
