import pytest

from datr_reverse import (DatrSyntaxError, DuplicateLhs, EvaluablePathUnsupported, IllegalCharacter,
                          TheoryError, format_theory, parse_theory, validate_theory)
from datr_reverse.syntax import Kind, Tok, tokenize


def test_tokenize_sentence():
    toks = tokenize("Sheep:<root> == sheep.")
    assert [(t.kind, t.text) for t in toks] == [
        (Tok.NODE, "Sheep"), (Tok.COLON, ":"), (Tok.LANGLE, "<"), (Tok.ATOM, "root"),
        (Tok.RANGLE, ">"), (Tok.DEFINE, "=="), (Tok.ATOM, "sheep"), (Tok.DOT, "."),
    ]


def test_tokenize_empty_input():
    assert tokenize("") == []


def test_tokenize_empty_rhs():
    kinds = [t.kind for t in tokenize("Noun:<affix sing> ==.")]
    assert kinds[-2:] == [Tok.DEFINE, Tok.DOT]


def test_tokenize_positions_and_comments():
    toks = tokenize("% header\nA:\n  <x> == y.")
    assert (toks[0].line, toks[0].column) == (2, 1)
    assert (toks[2].line, toks[2].column) == (3, 3)


@pytest.mark.parametrize("text, fragment", [
    ("#vars $x: a.", "declarations"),
    ("A:<> == $x.", "variables"),
    ("A:<> == b; c.", "illegal character"),
])
def test_illegal_characters(text, fragment):
    with pytest.raises(IllegalCharacter, match=fragment):
        tokenize(text)


def test_parse_example_theory(nouns):
    assert len(nouns.sentences) == 12
    assert nouns.nodes == ("House", "Sheep", "Foot", "Noun")
    assert nouns.node_index["Noun"] == {("orth",), ("affix", "sing"), ("affix", "sing", "gen"), ("affix", "plur")}
    assert nouns.attributes == ("affix", "gen", "orth", "plur", "root", "sing")
    assert nouns.terminals == {"house", "sheep", "foot", "feet", "s"}


def test_parse_descriptor_kinds():
    theory = parse_theory("""
        N:
          <a> == x
          <b> == M:<c>
          <c> == M
          <d> == <e>
          <e> == "M:<f>"
          <f> == "M"
          <g> == "<h>"
          <h> == ()
          <i> == .
        M: <> == z.
    """)
    kinds = [s.rhs[0].kind if s.rhs else None for s in theory.sentences if s.node == "N"]
    assert kinds == [Kind.ATOM, Kind.LOCAL_NODE_PATH, Kind.LOCAL_NODE, Kind.LOCAL_PATH,
                     Kind.GLOBAL_NODE_PATH, Kind.GLOBAL_NODE, Kind.GLOBAL_PATH, Kind.EMPTY, None]
    assert theory.sentence("N", ("e",)).rhs[0].kind.quoted
    assert not theory.sentence("N", ("b",)).rhs[0].kind.quoted


def test_simple_cycle_sentence():
    theory = parse_theory("N:<a> == <a>.")
    (sentence,) = theory.sentences
    (d,) = sentence.rhs
    assert d.kind is Kind.LOCAL_PATH and d.path == ("a",)


def test_dotted_equations_continue_node():
    theory = parse_theory("A: <> == x. <b> == y.\nB: <> == z.")
    assert [(s.node, s.path) for s in theory.sentences] == [("A", ()), ("A", ("b",)), ("B", ())]


def test_evaluable_path_rejected():
    with pytest.raises(EvaluablePathUnsupported):
        parse_theory('N:<a> == N:<"X:<b>" c>.')


def test_duplicate_lhs():
    with pytest.raises(DuplicateLhs) as info:
        parse_theory("A: <x> == y. A: <x> == z.")
    assert info.value.node == "A" and info.value.path == ("x",)
    assert info.value.line == 1


@pytest.mark.parametrize("text", ["A <> == b.", "A: <> == b", "A: <b == c.", ": <> == b."])
def test_syntax_errors_carry_position(text):
    with pytest.raises(DatrSyntaxError) as info:
        parse_theory(text)
    assert info.value.line == 1 and info.value.column >= 1


def test_single_equals_is_lexical_error():
    with pytest.raises(TheoryError) as info:
        parse_theory("A: <> = b.")
    assert (info.value.line, info.value.column) == (1, 7)


def test_round_trip(nouns, nouns_source):
    again = parse_theory(format_theory(nouns))
    assert again.sentences == nouns.sentences


def test_validate_example_theory(nouns):
    assert validate_theory(nouns) == []


def test_validate_undefined_node():
    codes = {(d.code, d.node) for d in validate_theory(parse_theory("A: <> == Verb.")) if d.code == "UndefinedNode"}
    assert codes == {("UndefinedNode", "Verb")}


def test_validate_mutual_recursion():
    warned = {d.node for d in validate_theory(parse_theory("A:<> == B. B:<> == A.")) if d.code == "NonTerminationRisk"}
    assert warned == {"A", "B"}


def test_validate_unresolvable_path():
    diags = validate_theory(parse_theory("A: <x> == B:<y>. B: <z> == q."))
    assert [d.code for d in diags] == ["UnresolvablePath"]
