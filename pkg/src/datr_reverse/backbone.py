"""Compilation of a theory into its context-free backbone.

Every sentence ``N:P == d1 ... dk`` becomes one production whose left-hand
side is the quintuple ``[N, P, C, N', P']``: local node and path, the path
extension constraint ``C``, and the global node and path.  ``N'`` and ``P'``
are rule-local variables, always ``NodeVar(0)`` and ``TailVar(0)``, so two
rules compare equal exactly when they are alpha-equivalent.

Right-hand side images per descriptor kind::

    ()          nothing
    atom        atom
    N2:P2       [N2, P2, C, N', P']
    N2          [N2, P,  C, N', P']
    P2          [N,  P2, C, N', P']
    "N2:P2"     [N2, P2, C, N2, P2]
    "N2"        [N2, P', C, N2, P']
    "P2"        [N', P2, C, N', P2]

The images leave the query extension implicit; the reverse engine appends it
to every concrete path slot when a rule is used.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass, field

from .errors import EvaluablePathUnsupported, UnknownNode
from .paths import ConstraintSet, Path, format_constraint, strip_empty, suffix_set
from .syntax import Kind, Sentence, Theory
from .terms import NodeSlot, NodeVar, PathTerm, path_var

GLOBAL_NODE = NodeVar(0)
GLOBAL_PATH = path_var(0)


@dataclass(frozen=True)
class NonTerminal:
    node: NodeSlot
    path: PathTerm
    constraint: ConstraintSet
    gnode: NodeSlot
    gpath: PathTerm

    def __str__(self) -> str:
        return (f"[{_slot(self.node)}, {_slot(self.path)}, {format_constraint(self.constraint)}, "
                f"{_slot(self.gnode)}, {_slot(self.gpath)}]")


def _slot(slot) -> str:
    # Rule variables print in the primed notation.
    if slot == GLOBAL_NODE:
        return "N'"
    if slot == GLOBAL_PATH:
        return "P'"
    return str(slot)


Symbol = NonTerminal | str


@dataclass(frozen=True)
class Rule:
    lhs: NonTerminal
    rhs: tuple[Symbol, ...]
    sentence: Sentence = field(compare=False)

    @property
    def is_epsilon(self) -> bool:
        return not self.rhs

    def __str__(self) -> str:
        body = " ".join(str(s) for s in self.rhs) if self.rhs else "ε"
        return f"{self.lhs} -> {body}"


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]
    by_terminal: dict[str, tuple[int, ...]]
    by_local_node: dict[str, tuple[int, ...]]
    var_headed: tuple[int, ...]
    epsilon_rules: tuple[int, ...]
    terminals: frozenset[str]
    alphabet: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.rules)

    def candidates(self, node: str) -> tuple[int, ...]:
        """Rules whose first symbol could match an item at ``node``."""
        return self.by_local_node.get(node, ()) + self.var_headed


def path_constraint(path: Path, node: str, theory: Theory) -> ConstraintSet:
    """Extensions of ``path`` that a longer definition at ``node`` claims.

    The empty suffix (``path`` itself) is dropped.
    """
    try:
        paths = theory.node_index[node]
    except KeyError:
        raise UnknownNode(node) from None
    return strip_empty(suffix_set(path, paths))


def _image(d, sentence: Sentence, constraint: ConstraintSet) -> Symbol | None:
    k = d.kind
    if k is Kind.EMPTY:
        return None
    if k is Kind.ATOM:
        return d.atom
    if d.path is not None and not all(isinstance(a, str) for a in d.path):
        raise EvaluablePathUnsupported(f"evaluable path in {sentence}")
    here = PathTerm(sentence.path)
    if k is Kind.LOCAL_NODE_PATH:
        return NonTerminal(d.node, PathTerm(d.path), constraint, GLOBAL_NODE, GLOBAL_PATH)
    if k is Kind.LOCAL_NODE:
        return NonTerminal(d.node, here, constraint, GLOBAL_NODE, GLOBAL_PATH)
    if k is Kind.LOCAL_PATH:
        return NonTerminal(sentence.node, PathTerm(d.path), constraint, GLOBAL_NODE, GLOBAL_PATH)
    if k is Kind.GLOBAL_NODE_PATH:
        return NonTerminal(d.node, PathTerm(d.path), constraint, d.node, PathTerm(d.path))
    if k is Kind.GLOBAL_NODE:
        return NonTerminal(d.node, GLOBAL_PATH, constraint, d.node, GLOBAL_PATH)
    # GLOBAL_PATH: the local node is the global node variable.
    return NonTerminal(GLOBAL_NODE, PathTerm(d.path), constraint, GLOBAL_NODE, PathTerm(d.path))


def compile_sentence(sentence: Sentence, theory: Theory) -> Rule:
    constraint = path_constraint(sentence.path, sentence.node, theory)
    lhs = NonTerminal(sentence.node, PathTerm(sentence.path), constraint, GLOBAL_NODE, GLOBAL_PATH)
    rhs = tuple(s for d in sentence.rhs if (s := _image(d, sentence, constraint)) is not None)
    return Rule(lhs, rhs, sentence)


def compile_theory(theory: Theory) -> RuleSet:
    rules = tuple(compile_sentence(s, theory) for s in theory.sentences)
    by_terminal: dict[str, list[int]] = {}
    by_node: dict[str, list[int]] = {}
    var_headed: list[int] = []
    epsilon: list[int] = []
    for i, rule in enumerate(rules):
        if not rule.rhs:
            epsilon.append(i)
            continue
        head = rule.rhs[0]
        if isinstance(head, str):
            by_terminal.setdefault(head, []).append(i)
        elif isinstance(head.node, str):
            by_node.setdefault(head.node, []).append(i)
        else:
            var_headed.append(i)
    return RuleSet(
        rules=rules,
        by_terminal={k: tuple(v) for k, v in by_terminal.items()},
        by_local_node={k: tuple(v) for k, v in by_node.items()},
        var_headed=tuple(var_headed),
        epsilon_rules=tuple(epsilon),
        terminals=theory.terminals,
        alphabet=theory.attributes,
    )


def _slot_json(slot) -> object:
    if isinstance(slot, str):
        return slot
    if isinstance(slot, NodeVar):
        return {"var": f"N{slot.id}"}
    if isinstance(slot, PathTerm):
        out: dict[str, object] = {"path": list(slot.prefix)}
        if slot.tail is not None:
            out["tail"] = f"P{slot.tail.id}"
        return out
    raise TypeError(slot)


def nonterminal_json(nt: NonTerminal) -> dict[str, object]:
    return {
        "node": _slot_json(nt.node),
        "path": _slot_json(nt.path),
        "constraint": [list(p) for p in sorted(nt.constraint)],
        "global_node": _slot_json(nt.gnode),
        "global_path": _slot_json(nt.gpath),
    }


def rule_json(rule: Rule) -> dict[str, object]:
    return {
        "sentence": str(rule.sentence),
        "lhs": nonterminal_json(rule.lhs),
        "rhs": [s if isinstance(s, str) else nonterminal_json(s) for s in rule.rhs],
    }


def dump_rules(rules: Iterable[Rule], fmt: str = "text") -> str:
    rules = list(rules)
    if fmt == "json":
        return json.dumps([rule_json(r) for r in rules], indent=2)
    return "\n".join(str(r) for r in rules)

