"""Tree model: grammar round-trips, indexing, queries, inversion, validation."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import T1_INVERSE_TEXT, T1_TEXT, small_trees
from ptspace import (
    InvalidTreeError,
    Operator,
    ParseError,
    ProcessTree,
    activity_count,
    alphabet,
    format_tree,
    invert,
    parse_tree,
    validate,
)
from ptspace.tree import iter_ptt


def test_t1_structure(t1):
    assert t1.size == 13
    assert t1.labels[0] is Operator.SEQUENCE
    assert t1.children[0] == (1, 2, 3, 4)
    assert t1.labels[1] == "a" and t1.labels[4] == "g"
    assert t1.labels[3] is Operator.PARALLEL
    assert t1.labels[5] is Operator.LOOP
    assert t1.labels[7] is Operator.REVERSE_SEQUENCE
    assert t1.labels[9] is Operator.CHOICE
    assert t1.labels[12] is None  # the tau leaf under the choice
    assert validate(t1) == []


def test_t1_canonical_form(t1):
    assert format_tree(t1) == T1_TEXT
    assert format_tree(parse_tree(format_tree(t1))) == T1_TEXT


def test_single_leaf():
    tree = parse_tree("a")
    assert tree.size == 1
    assert tree.labels == ("a",)
    assert format_tree(tree) == "a"


def test_tau_leaf():
    tree = parse_tree("tau")
    assert tree.labels == (None,)
    assert format_tree(tree) == "tau"


def test_loop_arity_error():
    with pytest.raises(InvalidTreeError, match="loop"):
        parse_tree("*(a,b,c)")
    with pytest.raises(InvalidTreeError, match="loop"):
        parse_tree("*(a)")


@pytest.mark.parametrize(
    "text",
    ["", "->(", "->(a", "->(a,)", "X a", "->()", "a(b)", "->(a))", "1abc", "a,b"],
)
def test_syntax_errors_carry_position(text):
    with pytest.raises(ParseError) as info:
        parse_tree(text)
    assert info.value.position >= 0


def test_whitespace_insignificant(t1):
    spaced = "-> ( a , b , + ( * ( <- ( X ( c , tau ) , d ) , e ) , f ) , g )"
    assert parse_tree(spaced) == t1


def test_choice_token_vs_activity():
    # 'X' followed by '(' is the operator; alone it is an activity name
    assert parse_tree("X(a,b)").labels[0] is Operator.CHOICE
    assert parse_tree("X").labels == ("X",)


def test_reserved_token_misuse_via_builder():
    bad = ProcessTree(labels=("tau",), parents=(None,), children=((),))
    assert any("reserved" in v for v in validate(bad))


def test_breadth_first_indexing(t1):
    # level order: root; a b + g; loop f; seq e; xor d; c tau
    for v in range(1, t1.size):
        assert t1.parents[v] < v
    for v in range(t1.size):
        assert list(t1.children[v]) == sorted(t1.children[v])


def test_structural_queries(t1):
    # spec example on Fig. 1: lsib(v_1.2) = {v_1.1}, rsib(v_1.2) = {v_1.3, v_1.4}
    assert t1.lsib(2) == (1,)
    assert t1.rsib(2) == (3, 4)
    assert t1.sib(0) == ()
    assert t1.parent(0) is None
    assert t1.desc(0) == tuple(range(1, 13))
    assert t1.desc(5) == (7, 8, 9, 10, 11, 12)
    sub = t1.subtree(5)
    assert format_tree(sub) == "*(<-(X(c,tau),d),e)"
    assert sub.root == 0


def test_invert_is_label_only(t1):
    inv = invert(t1)
    assert format_tree(inv) == T1_INVERSE_TEXT
    assert inv.parents == t1.parents
    assert inv.children == t1.children
    assert invert(inv) == t1


def test_invert_without_sequences_is_identity():
    tree = parse_tree("+(X(a,tau),*(b,c))")
    assert invert(tree) == tree


def test_alphabet_and_activity_count(t1):
    assert activity_count(t1) == 7
    assert alphabet(t1) == ("a", "b", "c", "d", "e", "f", "g")


def test_validate_reports_broken_invariants():
    no_children = ProcessTree(
        labels=(Operator.SEQUENCE,), parents=(None,), children=((),)
    )
    assert any("no children" in v for v in validate(no_children))

    leaf_with_children = ProcessTree(
        labels=("a", "b"), parents=(None, 0), children=((1,), ())
    )
    assert any("leaf label" in v for v in validate(leaf_with_children))

    bad_loop = ProcessTree(
        labels=(Operator.LOOP, "a"), parents=(None, 0), children=((1,), ())
    )
    assert any("loop" in v for v in validate(bad_loop))


def test_single_child_operator_is_accepted():
    tree = parse_tree("->(a)")
    assert validate(tree) == []
    assert tree.size == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_roundtrip_random_trees(seed):
    tree = small_trees(1, seed=seed, max_act=8)[0]
    assert parse_tree(format_tree(tree)) == tree
    assert invert(invert(tree)) == tree
    assert validate(tree) == []


def test_roundtrip_corpus_1000():
    for tree in small_trees(1000, seed=3, min_act=1, max_act=10):
        assert parse_tree(format_tree(tree)) == tree


def test_iter_ptt_skips_comments():
    lines = ["# header", "", "a", "->(a,b)", "#tail"]
    trees = list(iter_ptt(lines))
    assert [format_tree(t) for t in trees] == ["a", "->(a,b)"]
