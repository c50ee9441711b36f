import json

import pytest

from datr_reverse import UnknownNode, compile_theory, dump_rules, parse_theory
from datr_reverse.backbone import GLOBAL_NODE, GLOBAL_PATH, path_constraint
from datr_reverse.paths import (format_constraint, is_prefix, residual, satisfies, strip_empty,
                                suffix_set)
from datr_reverse.terms import PathTerm

from conftest import CONSTRAINT_SOURCE
from oracles import NOUNS_BACKBONE, nt


def P(text):
    return tuple(text.split())


def S(*texts):
    return frozenset(P(t) for t in texts)


def test_suffix_set_raw_includes_empty():
    assert suffix_set(P("a"), S("a", "a b", "c")) == S("", "b")


def test_suffix_set_empty_prefix_is_identity():
    assert suffix_set((), S("a", "a b")) == S("a", "a b")


def test_suffix_set_no_match():
    assert suffix_set(P("x"), S("a")) == frozenset()


@pytest.mark.parametrize("path, expected", [("", {"a", "a b"}), ("a", {"b"}), ("a b", set())])
def test_path_constraint(path, expected):
    theory = parse_theory(CONSTRAINT_SOURCE)
    assert path_constraint(P(path), "N", theory) == S(*expected)


def test_path_constraint_unknown_node():
    with pytest.raises(UnknownNode):
        path_constraint((), "M", parse_theory(CONSTRAINT_SOURCE))


@pytest.mark.parametrize("path, constraint, ok", [
    ("affix sing", ["root", "affix plur"], True),
    ("a c", ["a", "a b"], False),
    ("", ["a"], True),
])
def test_satisfies(path, constraint, ok):
    assert satisfies(P(path), S(*constraint)) is ok


def test_residual_passes_longer_constraints_on():
    assert residual(P("affix"), S("root", "affix plur")) == S("plur")
    assert residual(P("affix plur"), S("affix plur")) is None
    assert residual((), S("a")) == S("a")


def test_path_helpers():
    assert is_prefix((), P("a")) and is_prefix(P("a"), P("a b")) and not is_prefix(P("b"), P("a b"))
    assert strip_empty(S("", "a")) == S("a")
    assert format_constraint(S("root", "affix plur")) == "{<affix plur>, <root>}"


def test_compile_matches_listing(nouns_rules):
    got = [(r.lhs, r.rhs) for r in nouns_rules.rules]
    assert got == NOUNS_BACKBONE


def test_rule_count_equals_sentence_count(nouns, nouns_rules):
    assert len(nouns_rules) == len(nouns.sentences) == 12


def test_global_path_image():
    (rule,) = compile_theory(parse_theory('N:<a> == "<b c>".')).rules
    assert rule.rhs == (nt(GLOBAL_NODE, "b c", [], GLOBAL_NODE, "b c"),)


def test_global_node_image():
    theory = parse_theory('N:<a> == "M". M:<> == x.')
    rule = compile_theory(theory).rules[0]
    assert rule.rhs == (nt("M", GLOBAL_PATH, [], "M", GLOBAL_PATH),)


def test_local_node_image_keeps_lhs_path():
    theory = parse_theory("N:<a> == M. N:<a b> == y. M:<> == x.")
    rule = compile_theory(theory).rules[0]
    assert rule.rhs == (nt("M", "a", ["b"]),)


def test_global_node_path_image():
    theory = parse_theory('N:<> == "M:<x>". M:<> == y.')
    assert compile_theory(theory).rules[0].rhs == (nt("M", "x", [], "M", "x"),)


def test_epsilon_rule(nouns_rules):
    eps = [str(nouns_rules.rules[i]) for i in nouns_rules.epsilon_rules]
    assert eps == ["[Sheep, <affix plur>, {}, N', P'] -> ε",
                   "[Noun, <affix sing>, {<gen>}, N', P'] -> ε"]


def test_indices_partition_rules(nouns_rules):
    indexed = (list(nouns_rules.epsilon_rules) + list(nouns_rules.var_headed)
               + [i for v in nouns_rules.by_terminal.values() for i in v]
               + [i for v in nouns_rules.by_local_node.values() for i in v])
    assert sorted(indexed) == list(range(len(nouns_rules)))
    assert set(nouns_rules.by_terminal) == {"house", "sheep", "foot", "feet", "s"}
    assert nouns_rules.candidates("Foot") == nouns_rules.var_headed


def test_dump_text(nouns_rules):
    lines = dump_rules(nouns_rules.rules).splitlines()
    assert len(lines) == 12
    assert lines[0] == "[House, <>, {<root>}, N', P'] -> [Noun, <>, {<root>}, N', P']"
    assert lines[8] == ("[Noun, <orth>, {}, N', P'] -> "
                        "[N', <root>, {}, N', <root>] [N', <affix>, {}, N', <affix>]")


def test_dump_json(nouns_rules):
    data = json.loads(dump_rules(nouns_rules.rules, "json"))
    assert len(data) == 12
    orth = data[8]
    assert orth["lhs"]["global_node"] == {"var": "N0"}
    assert orth["lhs"]["global_path"] == {"path": [], "tail": "P0"}
    assert orth["rhs"][0]["node"] == {"var": "N0"}
    assert orth["rhs"][0]["global_path"] == {"path": ["root"]}
    assert {tuple(r.keys()) for r in data} == {("sentence", "lhs", "rhs")}


def test_rules_are_alpha_equivalent_across_compilations(nouns):
    assert compile_theory(nouns).rules == compile_theory(nouns).rules
    assert PathTerm(()) != GLOBAL_PATH
