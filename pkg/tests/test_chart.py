import pytest

from datr_reverse import EvalLimits, Query, compile_theory, eval_query, parse_theory, reverse_query
from datr_reverse.chart import (Category, ChartParser, InactiveItem, ReverseAnswer, expand_answer,
                                extract_answers, minimize)
from datr_reverse.terms import NodeVar, PathTerm, TailVar

from conftest import CYCLE_SOURCES


def P(text):
    return tuple(text.split())


def S(*texts):
    return frozenset(P(t) for t in texts)


def answers(rules, text):
    return {str(a) for a in reverse_query(rules, text.split()).answers}


def open_cat(node, path, constraint=(), gnode=None):
    """Category with an open local path and a free global path."""
    gnode = NodeVar(0) if gnode is None else gnode
    return Category(node, PathTerm(P(path), TailVar(0)), gnode, PathTerm((), TailVar(1)),
                    (S(*constraint), frozenset()))


def covered(result, alphabet, max_len):
    out = set()
    for a in result.answers:
        out |= expand_answer(a, alphabet, max_len)
    return out


def test_sheep_answers(nouns_rules):
    assert answers(nouns_rules, "sheep") == {
        "Sheep:<root>+…", "Sheep:<orth plur>+…", "Sheep:<orth sing>+… !{<gen>}"}


def test_sheep_covers_published_queries(nouns, nouns_rules):
    queries = covered(reverse_query(nouns_rules, ["sheep"]), nouns.attributes, 2)
    assert {Query("Sheep", P("orth sing")), Query("Sheep", P("orth plur"))} <= queries
    root = [a for a in reverse_query(nouns_rules, ["sheep"]).answers if a.path == P("root")]
    assert root == [ReverseAnswer("Sheep", P("root"), True, frozenset())]


def test_foot_root_forbids_plural(nouns_rules):
    (root,) = [a for a in reverse_query(nouns_rules, ["foot"]).answers if a.path == P("root")]
    assert root.node == "Foot" and root.open_extension
    assert S("plur") <= root.forbidden


def test_house_s_answers(nouns_rules):
    assert answers(nouns_rules, "house s") == {"House:<orth plur>+…", "House:<orth sing gen>+…"}


def test_empty_value_answers(nouns_rules):
    got = answers(nouns_rules, "")
    assert {"Sheep:<affix plur>+…", "Noun:<affix sing>+… !{<gen>}"} <= got


def test_unknown_atom(nouns_rules):
    result = reverse_query(nouns_rules, ["zzz"])
    assert result.answers == () and "zzz" in result.diagnostics[0]


def test_answers_evaluate_forward(nouns, nouns_rules):
    for text in ["sheep", "foot", "feet", "house", "house s", "s", "feet s", ""]:
        value = tuple(text.split())
        for q in covered(reverse_query(nouns_rules, value), nouns.attributes, 3):
            assert eval_query(nouns, q) == value, q


def test_empty_input_only_zero_width_items(nouns_rules):
    result = reverse_query(nouns_rules, [])
    assert {(i.start, i.end) for i in result.chart.items} == {(0, 0)}


def test_epsilon_items_at_every_vertex(nouns_rules):
    records = []
    reverse_query(nouns_rules, ["house", "s"], trace=records.append)
    vertices = {r["span"][0] for r in records if r["proc"] == "add_epsilon"}
    assert vertices == {0, 1, 2}
    scanned = {tuple(r["span"]) for r in records if r["proc"] == "reduce" and r["item"] in ("house", "s")}
    assert scanned == {(0, 1), (1, 2)}


def test_epsilon_and_reduced_zero_width_items(nouns_rules):
    chart = reverse_query(nouns_rules, ["house", "s"]).chart
    for v in (0, 1, 2):
        assert InactiveItem(v, v, open_cat("Sheep", "affix plur")) in chart
        assert InactiveItem(v, v, open_cat("Noun", "affix sing", ["gen"])) in chart
        assert InactiveItem(v, v, open_cat("Sheep", "affix sing", ["gen"])) in chart


def test_reduce_terminal(nouns_rules):
    chart = reverse_query(nouns_rules, ["house"]).chart
    assert InactiveItem(0, 1, open_cat("House", "root")) in chart


def test_worked_inactive_item(nouns_rules):
    chart = reverse_query(nouns_rules, ["house", "s"]).chart
    assert InactiveItem(0, 1, open_cat("House", "orth sing", ["gen"], gnode="House")) in chart


def test_worked_active_item(nouns_rules):
    chart = reverse_query(nouns_rules, ["house", "s"]).chart
    orth = next(i for i, r in enumerate(nouns_rules.rules) if r.lhs.path.prefix == P("orth"))
    actives = [a for a in chart.active if (a.start, a.end, a.rule, a.dot) == (0, 1, orth, 1)]
    assert [a.env[0] for a in actives] == ["House"]
    assert InactiveItem(0, 2, open_cat("House", "orth plur", gnode="House")) in chart


def test_complete_with_zero_width_item(nouns_rules):
    chart = reverse_query(nouns_rules, ["sheep"]).chart
    assert InactiveItem(0, 1, open_cat("Noun", "orth sing", ["gen"], gnode="Sheep")) in chart


def test_duplicate_insert_ignored(nouns_rules):
    parser = ChartParser(nouns_rules, ["sheep"])
    parser.parse()
    size = len(parser.chart)
    item = next(iter(parser.chart.items))
    assert not parser.chart.add(item, (0, ()))
    parser.add_epsilon(0)
    parser.drain()
    assert len(parser.chart) == size


def test_span_additivity(nouns_rules):
    chart = reverse_query(nouns_rules, ["house", "s"]).chart
    value = ["house", "s"]
    for item in chart.inactive:
        assert chart.leaves(item) == value[item.start:item.end]


def test_start_symbol_rejects_foreign_global():
    from datr_reverse.chart import Chart
    chart = Chart(1)
    chart.add(InactiveItem(0, 1, Category("Noun", PathTerm(P("orth sing"), TailVar(0)), "Sheep",
                                          PathTerm((), TailVar(1)), (S("gen"), frozenset()))), (0, ()))
    assert extract_answers(chart) == ()
    chart.add(InactiveItem(0, 1, open_cat("Sheep", "root")), (0, ()))
    assert extract_answers(chart) == (ReverseAnswer("Sheep", P("root"), True),)


def test_minimize_drops_subsumed():
    general = ReverseAnswer("A", P("x"), True)
    specific = ReverseAnswer("A", P("x y"), True, S("z"))
    closed = ReverseAnswer("A", P("x q"), False)
    forbidden = ReverseAnswer("A", P("x"), True, S("y"))
    assert minimize([general, specific, closed]) == (general,)
    assert set(minimize([forbidden, specific])) == {forbidden, specific}


def test_expand_answer():
    sheep = ReverseAnswer("Sheep", P("root"), True)
    assert expand_answer(sheep, ["plur"], 2) == {Query("Sheep", P("root")), Query("Sheep", P("root plur"))}
    foot = ReverseAnswer("Foot", P("root"), True, S("plur"))
    assert expand_answer(foot, ["plur"], 2) == {Query("Foot", P("root"))}
    house = ReverseAnswer("House", P("orth plur"), False)
    assert expand_answer(house, ["plur"], 4) == {Query("House", P("orth plur"))}


def test_answer_rendering():
    assert str(ReverseAnswer("Foot", P("root"), True, S("plur"))) == "Foot:<root>+… !{<plur>}"
    assert str(ReverseAnswer("House", P("orth plur"), False)) == "House:<orth plur>"
    assert ReverseAnswer("Foot", P("root"), True, S("plur")).as_json() == {
        "node": "Foot", "path": ["root"], "open_extension": True, "forbidden": [["plur"]]}


def test_identity_global_path_answer():
    theory = parse_theory('A: <> == "<x>" <x> == hit.')
    result = reverse_query(compile_theory(theory), ["hit"])
    assert {str(a) for a in result.answers} == {"A:<x>+…", "A:<>+… !{<x>}"}
    for path in ["", "y", "y y", "x", "x y"]:
        assert eval_query(theory, Query("A", P(path))) == ("hit",)


def test_lengthening_cycle_is_bounded():
    rules = compile_theory(parse_theory("N:<a> == <a a>. N:<a a a a a a> == x."))
    result = reverse_query(rules, ["x"], EvalLimits(max_path_len=5))
    assert result.suppressed > 0
    assert any("ExhaustedBudget" in d for d in result.diagnostics)


@pytest.mark.parametrize("name", sorted(CYCLE_SOURCES))
def test_cycle_theories_terminate(name):
    rules = compile_theory(parse_theory(CYCLE_SOURCES[name]))
    for value in ([], ["x"]):
        result = reverse_query(rules, value, EvalLimits(max_path_len=10))
        assert result.answers == ()


def test_global_node_inheritance():
    theory = parse_theory('A: <> == "B". B: <x> == one <y> == C:<z>. C: <z> == "<x>".')
    rules = compile_theory(theory)
    assert {str(a) for a in reverse_query(rules, ["one"]).answers} == {
        "A:<x>+…", "A:<y>+…", "B:<x>+…", "B:<y>+…"}
