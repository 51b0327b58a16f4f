"""Search strategies: optimality, agreement, combination, determinism."""

from collections import deque

import pytest

from conftest import small_trees
from ptspace import (
    LoopBound,
    MeetMismatchError,
    SearchLimitExceeded,
    Transition,
    combine_direct,
    enumerate_language,
    final_state,
    initial_state,
    invert,
    parse_tree,
    project_run,
    replay_run,
    search,
    search_bd,
    search_bdp,
    search_ud,
    successors,
)
from ptspace.statespace import FUTURE, OPEN, parse_run

STRATEGIES = (search_ud, search_bd, search_bdp)


def unreduced_shortest_length(tree, cap=200_000):
    """Independent oracle: plain BFS over the full one-transition relation."""
    start = initial_state(tree)
    goal = final_state(tree)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        d = dist[state]
        if state == goal:
            return d
        for _, succ in successors(tree, state):
            if succ not in dist:
                assert len(dist) < cap, "oracle cap exceeded"
                dist[succ] = d + 1
                queue.append(succ)
    raise AssertionError("final state unreachable")


def test_sequence_run_is_exact():
    tree = parse_tree("->(a,b)")
    outcome = search_ud(tree)
    assert outcome.run_length == 6
    assert outcome.run == parse_run(
        "v0 F->O\nv1 F->O\nv1 O->C\nv2 F->O\nv2 O->C\nv0 O->C"
    )
    assert outcome.expanded_states == 7  # the whole 7-state chain


def test_choice_with_tau_is_five():
    tree = parse_tree("X(a,tau)")
    for fn in STRATEGIES:
        assert fn(tree).run_length == 5


def test_single_leaf_is_two():
    tree = parse_tree("a")
    for fn in STRATEGIES:
        assert fn(tree).run_length == 2


def test_bd_meets_in_the_middle_on_chain():
    tree = parse_tree("->(a)")
    outcome = search_bd(tree)
    assert outcome.run_length == 4
    assert replay_run(tree, outcome.run) == final_state(tree)


def test_outcomes_replay_to_final():
    for tree in small_trees(50, seed=13, max_act=6):
        for fn in STRATEGIES:
            outcome = fn(tree)
            assert replay_run(tree, outcome.run) == final_state(tree)
            assert outcome.run_length == len(outcome.run)
            assert outcome.expanded_states > 0
            assert outcome.wall_time >= 0.0


def test_cross_strategy_lengths_and_oracle():
    for tree in small_trees(120, seed=37, max_act=5):
        baseline = unreduced_shortest_length(tree)
        lengths = {fn(tree).run_length for fn in STRATEGIES}
        assert lengths == {baseline}, (tree, lengths, baseline)


def test_projected_shortest_run_is_in_language():
    for tree in small_trees(40, seed=43, max_act=5):
        trace = project_run(tree, search_ud(tree).run)
        assert trace in enumerate_language(tree, LoopBound(2))


def test_symmetry_under_inversion():
    for tree in small_trees(60, seed=53, max_act=6):
        assert search_bd(tree).run_length == search_bd(invert(tree)).run_length


def test_bd_beats_ud_on_parallel_heavy_trees():
    # the trend that motivates bidirectional search: wide parallelism
    wins = 0
    total = 0
    for text in (
        "+(a,b,c,d,e)",
        "+(->(a,b),->(c,d),->(e,f))",
        "+(X(a,b),X(c,d),X(e,f),g)",
        "+(a,b,c,->(d,e),f)",
        "+(+(a,b),+(c,d),+(e,f))",
    ):
        tree = parse_tree(text)
        ud = search_ud(tree).expanded_states
        bd = search_bd(tree).expanded_states
        total += 1
        wins += bd < ud
    assert wins > total / 2


def test_combine_direct_empty_backward():
    tree = parse_tree("->(a,b)")
    full = search_ud(tree).run
    assert combine_direct(tree, full, ()) == full


def test_combine_direct_rejects_mismatch():
    tree = parse_tree("->(a,b)")
    forward = (Transition(0, FUTURE, OPEN),)
    backward = (Transition(0, FUTURE, OPEN), Transition(2, FUTURE, OPEN))
    with pytest.raises(MeetMismatchError):
        combine_direct(tree, forward, backward)


def test_combine_direct_hand_meet():
    tree = parse_tree("->(a)")
    forward = parse_run("v0 F->O\nv1 F->O")
    backward = parse_run("v0 F->O\nv1 F->O")  # on the inverse tree
    combined = combine_direct(tree, forward, backward)
    assert len(combined) == 4
    assert replay_run(tree, combined) == final_state(tree)


def test_state_cap_failure_is_explicit():
    tree = parse_tree("+(a,b,c,d,e,f,g,h)")
    with pytest.raises(SearchLimitExceeded):
        search_ud(tree, state_cap=50)
    with pytest.raises(SearchLimitExceeded):
        search_bd(tree, state_cap=50)
    with pytest.raises(SearchLimitExceeded):
        search_bdp(tree, state_cap=50)


def test_timeout_failure_is_explicit():
    tree = parse_tree("+(" + ",".join(f"a{i}" for i in range(12)) + ")")
    with pytest.raises(SearchLimitExceeded):
        search_ud(tree, timeout=0.0)


def test_dispatch_by_name():
    tree = parse_tree("->(a,b)")
    assert search(tree, "ud").run_length == 6
    with pytest.raises(ValueError):
        search(tree, "dfs")


def test_ud_and_bd_are_deterministic():
    for tree in small_trees(20, seed=59, max_act=5):
        first_ud, second_ud = search_ud(tree), search_ud(tree)
        assert first_ud.run == second_ud.run
        assert first_ud.expanded_states == second_ud.expanded_states
        first_bd, second_bd = search_bd(tree), search_bd(tree)
        assert first_bd.run == second_bd.run
        assert first_bd.expanded_states == second_bd.expanded_states


def test_bdp_length_matches_bd_repeatedly():
    tree = parse_tree("+(->(a,b),X(c,d),*(e,f))")
    want = search_bd(tree).run_length
    for _ in range(8):
        assert search_bdp(tree).run_length == want
